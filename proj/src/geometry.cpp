// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#include "masersim/geometry.hpp"

#include <cmath>

#include "masersim/constants.hpp"

namespace masersim {

namespace {
double deg2rad(double deg) { return deg * constants::pi / 180.0; }

// Rotation about the lab X axis mapping lab coordinates to a molecular frame
// whose Y and Z axes are turned by `deg` about the shared X axis.
Eigen::Matrix3d lab_to_molecular_about_x(double deg) {
  const double c = std::cos(deg2rad(deg));
  const double s = std::sin(deg2rad(deg));
  Eigen::Matrix3d r;
  // Rows: molecular X, Y, Z expressed in lab coordinates.
  r << 1, 0, 0,
       0, c, s,
       0, -s, c;
  return r;
}
}  // namespace

void WedgeMount::validate() const {
  if (!(alpha_deg >= 0.0 && alpha_deg < 90.0))
    throw ValidationError("geometry: wedge angle alpha must lie in [0, 90)");
  if (!(beta_deg >= 0.0 && beta_deg < 360.0))
    throw ValidationError("geometry: beta must lie in [0, 360)");
}

void LabOrientation::validate() const {
  if (!(b0_mag_mt >= 0.0))
    throw ValidationError("geometry: field magnitude must be >= 0");
  if (!std::isfinite(theta_deg))
    throw ValidationError("geometry: theta must be finite");
}

WedgeMount wedge_from_crystallography(double angle_a_z1_deg, double angle_b_z1_deg,
                                      double angle_cp_z1_deg, bool flip_b_axis) {
  const double ca = std::cos(deg2rad(angle_a_z1_deg));
  const double cb = std::cos(deg2rad(angle_b_z1_deg));
  const double cc = std::cos(deg2rad(angle_cp_z1_deg));
  const double norm_sq = ca * ca + cb * cb + cc * cc;
  if (std::abs(norm_sq - 1.0) > 1e-3)
    throw InconsistentDirectionCosines(
        "wedge_from_crystallography: direction cosines do not describe a unit axis");

  WedgeMount mount;
  mount.alpha_deg = 90.0 - angle_cp_z1_deg;
  double beta = std::atan2(ca, cb) * 180.0 / constants::pi;
  // The b axis is undirected: reduce to [0, 180); the trEPR-resolved
  // pi ambiguity is applied on top.
  beta = std::fmod(beta, 180.0);
  if (beta < 0) beta += 180.0;
  if (flip_b_axis) beta += 180.0;
  mount.beta_deg = beta;
  mount.validate();
  return mount;
}

std::pair<SiteFrame, SiteFrame> site_frames(const WedgeMount& mount,
                                            double wedge_actual_deg,
                                            double site_angle_deg) {
  mount.validate();
  const double tilt =
      wedge_actual_deg >= 0.0 ? wedge_actual_deg - mount.alpha_deg : 0.0;

  SiteFrame s1;
  s1.site_id = 1;
  s1.rotation = lab_to_molecular_about_x(tilt);
  SiteFrame s2;
  s2.site_id = 2;
  s2.rotation = lab_to_molecular_about_x(tilt + site_angle_deg);
  return {s1, s2};
}

Eigen::Vector3d field_in_molecular_frame(const LabOrientation& orientation,
                                         const SiteFrame& frame) {
  orientation.validate();
  const double th = deg2rad(orientation.theta_deg);
  const Eigen::Vector3d b_lab(orientation.b0_mag_mt * std::cos(th),
                              orientation.b0_mag_mt * std::sin(th), 0.0);
  return frame.rotation * b_lab;
}

Eigen::Vector3d b1_direction_molecular(const LabOrientation& orientation,
                                       const SiteFrame& frame) {
  const double th = deg2rad(orientation.theta_deg);
  const Eigen::Vector3d b1_lab(-std::sin(th), std::cos(th), 0.0);
  return frame.rotation * b1_lab;
}

}  // namespace masersim
