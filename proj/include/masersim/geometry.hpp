// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_GEOMETRY_HPP
#define MASERSIM_GEOMETRY_HPP

#include <Eigen/Dense>
#include <utility>

#include "masersim/errors.hpp"

namespace masersim {

// Wedged sample holder: alpha is the wedge angle, beta the angle between the
// major axis of the wedged elliptical surface and the crystal b axis.
struct WedgeMount {
  double alpha_deg = 15.1;   // in [0, 90)
  double beta_deg = 124.0;   // in [0, 360)

  void validate() const;
};

// Rotation from lab coordinates into one pentacene molecular frame.
// Rows of `rotation` are the molecular X, Y_m, Z_m axes expressed in lab
// coordinates, so v_mol = rotation * v_lab.
struct SiteFrame {
  int site_id = 1;                 // 1 or 2
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

// Goniometer setting: theta = 0 is defined as B0 // X. The field is
// horizontal and rotates counterclockwise about the lab Z axis.
struct LabOrientation {
  double theta_deg = 0.0;
  double b0_mag_mt = 307.0;

  void validate() const;
};

// Derive the mount angles from the crystallographic direction cosines of the
// molecular Z1 axis against the crystal a, b and c' axes:
//   alpha = 90 deg - angle(c', Z1)
//   beta  = atan2(cos angle(a,Z1), cos angle(b,Z1)), reduced to [0, 180);
//           flip_b_axis adds the 180-degree b-axis ambiguity.
// Throws InconsistentDirectionCosines unless the squared cosines sum to 1
// within 1e-3.
WedgeMount wedge_from_crystallography(double angle_a_z1_deg, double angle_b_z1_deg,
                                      double angle_cp_z1_deg, bool flip_b_axis = false);

// Molecular frames of the two inequivalent doping sites for a correctly
// mounted crystal: site 1 has X and Y1 horizontal and Z1 along lab Z; site 2
// shares the X axis with Y2 rotated 60 degrees about it.
//
// wedge_actual_deg models a fabrication error in the wedge angle: the
// difference to mount.alpha_deg tilts both frames rigidly about the common X
// axis, which leaves B0 // X exact at theta = 0 and shows up near B0 // Y1.
// Pass a negative value (default) to use the design angle.
std::pair<SiteFrame, SiteFrame> site_frames(const WedgeMount& mount,
                                            double wedge_actual_deg = -1.0,
                                            double site_angle_deg = 60.0);

// Static field vector in the molecular coordinates of one site, mT.
Eigen::Vector3d field_in_molecular_frame(const LabOrientation& orientation,
                                         const SiteFrame& frame);

// Unit vector of the microwave drive field in molecular coordinates. The
// TE01d drive is taken horizontal and orthogonal to B0.
Eigen::Vector3d b1_direction_molecular(const LabOrientation& orientation,
                                       const SiteFrame& frame);

}  // namespace masersim

#endif
