#pragma once

// Scatterer models for pedestrians and bicyclists.
//
// Every object is reduced to a handful of point scatterers (body parts). The
// bulk scatterer (torso, bicycle frame) follows the object's straight-line
// trajectory; the others add a sinusoidal micro-motion along the bistatic
// range on top of it. Ranges are evaluated in closed form and velocities are
// the mean rate of path shortening over one slow-time step, so the torso path
// satisfies R(m+1) - R(m) = -v(m) * T_slow to rounding.

#include "mdattack/common.hpp"
#include "mdattack/ofdm_waveform.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace mdattack
{

enum class ClassLabel
{
    PED,
    BIC,
    PED_BIC,
    PED_PED,
    BIC_BIC,
};

inline constexpr std::array<ClassLabel, 5> kAllClasses{
    ClassLabel::PED, ClassLabel::BIC, ClassLabel::PED_BIC, ClassLabel::PED_PED, ClassLabel::BIC_BIC};

std::string_view to_string(ClassLabel label);
ClassLabel class_from_string(std::string_view name);

struct PedestrianParams
{
    double height = 1.7;        // m
    double speed = 1.3;         // m/s
    double heading = 140.0;     // degrees
    Eigen::Vector3d location{22.0, 4.0, 0.0};
};

struct BicyclistParams
{
    double speed = 4.5;
    double heading = -30.0;
    Eigen::Vector3d location{10.0, -4.0, 0.0};
    double gear_ratio = 4.0;
    bool pedaling = true;
};

using ObjectParams = std::variant<PedestrianParams, BicyclistParams>;

/// Axis-aligned placement region for initial object locations (40 m x 20 m).
struct Area
{
    double x_min = 5.0;
    double x_max = 45.0;
    double y_min = -10.0;
    double y_max = 10.0;

    bool contains(const Eigen::Vector3d& p) const
    {
        return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
    }
};

struct Scenario
{
    ClassLabel class_label = ClassLabel::PED;
    std::vector<ObjectParams> objects;
    Eigen::Vector3d tx_pos{0.0, 0.0, 0.0};
    Eigen::Vector3d rx_pos{50.0, 0.0, 0.0};
    Area area;
};

/// Checks the parameter ranges, the object mix against the label and that
/// every initial location lies inside the area. Throws ConfigError.
void validate(const Scenario& scenario);
void validate(const PedestrianParams& p);
void validate(const BicyclistParams& b);

enum class ScenarioDraw
{
    Randomized, ///< every tunable parameter drawn uniformly over its range
    Nominal,    ///< the reference values (PedestrianParams{} / BicyclistParams{})
};

Scenario sample_scenario(ClassLabel label, std::uint64_t seed, ScenarioDraw draw = ScenarioDraw::Randomized);

enum class BodyPart
{
    Torso,
    LeftArm,
    RightArm,
    LeftLeg,
    RightLeg,
    Frame,
    FrontWheel,
    RearWheel,
    Pedals,
};

/// One reflecting path at one frame.
///
/// `amplitude` is the complex path gain a_l. Its magnitude is the relative
/// cross-section over R^2. Its phase is the carrier phase -2 pi f_c R0 / c of
/// the frame's locally linear path R(t) ~ R0 - v t, so that
/// amplitude * e^{j 2 pi f_D m T_slow} equals the carrier phase at the
/// current range. For a constant-velocity path R0 is the initial range.
struct ScattererState
{
    std::complex<double> amplitude;
    double bistatic_range = 0.0;  // m
    double radial_velocity = 0.0; // m/s, positive when the path shortens
    double doppler = 0.0;         // Hz, carrier_freq * radial_velocity / c
    BodyPart part = BodyPart::Torso;
};

/// Builds a state from range, velocity and relative cross-section, folding
/// the carrier phase into the amplitude as described on ScattererState.
ScattererState make_state(const OfdmConfig& cfg, int frame, double bistatic_range, double radial_velocity,
                          double cross_section, BodyPart part);

/// All body-part paths of every object at t = frame * slow_time_step.
std::vector<ScattererState> scatterer_states(const Scenario& scenario, const OfdmConfig& cfg, int frame);

/// Cadence of the walking model in strides per second.
double gait_frequency(const PedestrianParams& p);

double bistatic_range(const Eigen::Vector3d& p, const Eigen::Vector3d& tx, const Eigen::Vector3d& rx);

} // namespace mdattack
