#include "mdattack/target_kinematics.hpp"

#include <cmath>
#include <random>
#include <span>
#include <string>

namespace mdattack
{

namespace
{

// Walking model constants.
constexpr double kGaitScale = 1.346;   // f_g = speed / (kGaitScale * sqrt(height))
constexpr double kLegSwing = 1.2;      // leg velocity amplitude / speed
constexpr double kArmSwing = 0.6;      // arm velocity amplitude / speed

// Bicycle model constants.
constexpr double kWheelRadius = 0.34;  // m
constexpr double kCrankRadius = 0.17;  // m

constexpr double kBulkCrossSection = 1.0;
constexpr double kPartCrossSection = 0.3;

Eigen::Vector3d heading_unit(double heading_deg)
{
    const double h = heading_deg * std::numbers::pi / 180.0;
    return {std::cos(h), std::sin(h), 0.0};
}

/// A sinusoidal radial micro-motion A sin(2 pi f t + phi) around the bulk path.
struct MicroMotion
{
    BodyPart part;
    double velocity_amplitude; // m/s
    double frequency;          // Hz
    double phase;              // rad
    double cross_section;

    /// Path shortening accumulated since t = 0.
    double displacement(double t) const
    {
        if (velocity_amplitude == 0.0 || frequency == 0.0)
            return 0.0;
        const double w = kTwoPi * frequency;
        return velocity_amplitude / w * (std::cos(phase) - std::cos(w * t + phase));
    }
};

void emit_object(std::vector<ScattererState>& out, const Scenario& sc, const OfdmConfig& cfg, int frame,
                 const Eigen::Vector3d& start, const Eigen::Vector3d& velocity, BodyPart bulk,
                 std::span<const MicroMotion> parts)
{
    const double step = cfg.slow_time_step;
    const double t0 = frame * step;
    const double t1 = t0 + step;
    const double r0 = bistatic_range(start + velocity * t0, sc.tx_pos, sc.rx_pos);
    const double r1 = bistatic_range(start + velocity * t1, sc.tx_pos, sc.rx_pos);

    out.push_back(make_state(cfg, frame, r0, (r0 - r1) / step, kBulkCrossSection, bulk));
    for (const auto& p : parts)
    {
        const double pr0 = r0 - p.displacement(t0);
        const double pr1 = r1 - p.displacement(t1);
        out.push_back(make_state(cfg, frame, pr0, (pr0 - pr1) / step, p.cross_section, p.part));
    }
}

void emit(std::vector<ScattererState>& out, const Scenario& sc, const OfdmConfig& cfg, int frame,
          const PedestrianParams& p)
{
    const double fg = gait_frequency(p);
    const double leg = kLegSwing * p.speed;
    const double arm = kArmSwing * p.speed;
    constexpr double pi = std::numbers::pi;
    // Opposite limbs in antiphase; each arm swings against its own-side leg.
    const std::array<MicroMotion, 4> limbs{{
        {BodyPart::LeftLeg, leg, fg, 0.0, kPartCrossSection},
        {BodyPart::RightLeg, leg, fg, pi, kPartCrossSection},
        {BodyPart::LeftArm, arm, fg, pi, kPartCrossSection},
        {BodyPart::RightArm, arm, fg, 0.0, kPartCrossSection},
    }};
    emit_object(out, sc, cfg, frame, p.location, heading_unit(p.heading) * p.speed, BodyPart::Torso, limbs);
}

void emit(std::vector<ScattererState>& out, const Scenario& sc, const OfdmConfig& cfg, int frame,
          const BicyclistParams& b)
{
    const double wheel_rate = b.speed / (kTwoPi * kWheelRadius);
    const double cadence = wheel_rate / b.gear_ratio;
    const double pedal = b.pedaling ? kTwoPi * cadence * kCrankRadius : 0.0;
    const std::array<MicroMotion, 3> parts{{
        {BodyPart::FrontWheel, b.speed, wheel_rate, 0.0, kPartCrossSection},
        {BodyPart::RearWheel, b.speed, wheel_rate, std::numbers::pi / 2.0, kPartCrossSection},
        {BodyPart::Pedals, pedal, cadence, 0.0, kPartCrossSection},
    }};
    emit_object(out, sc, cfg, frame, b.location, heading_unit(b.heading) * b.speed, BodyPart::Frame, parts);
}

void check_heading(double heading)
{
    if (!(heading >= -180.0 && heading <= 180.0))
        throw ConfigError("heading in [-180, 180] deg violated");
}

void check_location(const Eigen::Vector3d& loc)
{
    if (!Area{}.contains(loc) || loc.z() != 0.0)
        throw ConfigError("location in [[5,45],[-10,10],0] m violated");
}

} // namespace

std::string_view to_string(ClassLabel label)
{
    switch (label)
    {
    case ClassLabel::PED:
        return "PED";
    case ClassLabel::BIC:
        return "BIC";
    case ClassLabel::PED_BIC:
        return "PED_BIC";
    case ClassLabel::PED_PED:
        return "PED_PED";
    case ClassLabel::BIC_BIC:
        return "BIC_BIC";
    }
    return "?";
}

ClassLabel class_from_string(std::string_view name)
{
    for (auto c : kAllClasses)
        if (to_string(c) == name)
            return c;
    throw ConfigError("unknown class label '" + std::string(name) + "'");
}

double gait_frequency(const PedestrianParams& p)
{
    return p.speed / (kGaitScale * std::sqrt(p.height));
}

double bistatic_range(const Eigen::Vector3d& p, const Eigen::Vector3d& tx, const Eigen::Vector3d& rx)
{
    return (p - tx).norm() + (p - rx).norm();
}

void validate(const PedestrianParams& p)
{
    if (!(p.height >= 1.5 && p.height <= 2.0))
        throw ConfigError("pedestrian height in [1.5, 2] m violated");
    if (!(p.speed >= 0.0 && p.speed <= 1.4 * p.height))
        throw ConfigError("pedestrian speed in [0, 1.4 * height] m/s violated");
    check_heading(p.heading);
    check_location(p.location);
}

void validate(const BicyclistParams& b)
{
    if (!(b.speed >= 1.0 && b.speed <= 10.0))
        throw ConfigError("bicyclist speed in [1, 10] m/s violated");
    if (!(b.gear_ratio >= 0.5 && b.gear_ratio <= 6.0))
        throw ConfigError("bicyclist gear_ratio in [0.5, 6] violated");
    check_heading(b.heading);
    check_location(b.location);
}

void validate(const Scenario& scenario)
{
    int peds = 0;
    int bics = 0;
    for (const auto& obj : scenario.objects)
    {
        std::visit([](const auto& o) { validate(o); }, obj);
        const auto& loc = std::visit([](const auto& o) -> const Eigen::Vector3d& { return o.location; }, obj);
        if (!scenario.area.contains(loc))
            throw ConfigError("scenario: object location outside the area");
        (std::holds_alternative<PedestrianParams>(obj) ? peds : bics) += 1;
    }
    int want_peds = 0;
    int want_bics = 0;
    switch (scenario.class_label)
    {
    case ClassLabel::PED:
        want_peds = 1;
        break;
    case ClassLabel::BIC:
        want_bics = 1;
        break;
    case ClassLabel::PED_BIC:
        want_peds = want_bics = 1;
        break;
    case ClassLabel::PED_PED:
        want_peds = 2;
        break;
    case ClassLabel::BIC_BIC:
        want_bics = 2;
        break;
    }
    if (peds != want_peds || bics != want_bics)
        throw ConfigError("scenario: object mix does not match class label " +
                          std::string(to_string(scenario.class_label)));
}

Scenario sample_scenario(ClassLabel label, std::uint64_t seed, ScenarioDraw draw)
{
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const Area area;

    auto pedestrian = [&]() {
        PedestrianParams p;
        if (draw == ScenarioDraw::Nominal)
            return p;
        p.height = uniform(1.5, 2.0);
        p.speed = uniform(0.0, 1.4 * p.height);
        p.heading = uniform(-180.0, 180.0);
        p.location = {uniform(area.x_min, area.x_max), uniform(area.y_min, area.y_max), 0.0};
        return p;
    };
    auto bicyclist = [&]() {
        BicyclistParams b;
        if (draw == ScenarioDraw::Nominal)
            return b;
        b.speed = uniform(1.0, 10.0);
        b.heading = uniform(-180.0, 180.0);
        b.location = {uniform(area.x_min, area.x_max), uniform(area.y_min, area.y_max), 0.0};
        b.gear_ratio = uniform(0.5, 6.0);
        b.pedaling = std::bernoulli_distribution(0.5)(rng);
        return b;
    };

    Scenario sc;
    sc.class_label = label;
    switch (label)
    {
    case ClassLabel::PED:
        sc.objects = {pedestrian()};
        break;
    case ClassLabel::BIC:
        sc.objects = {bicyclist()};
        break;
    case ClassLabel::PED_BIC:
        sc.objects = {pedestrian(), bicyclist()};
        break;
    case ClassLabel::PED_PED:
        sc.objects = {pedestrian(), pedestrian()};
        break;
    case ClassLabel::BIC_BIC:
        sc.objects = {bicyclist(), bicyclist()};
        break;
    }
    return sc;
}

ScattererState make_state(const OfdmConfig& cfg, int frame, double range, double radial_velocity,
                          double cross_section, BodyPart part)
{
    ScattererState s;
    s.bistatic_range = range;
    s.radial_velocity = radial_velocity;
    s.doppler = cfg.carrier_freq * radial_velocity / kSpeedOfLight;
    s.part = part;
    const double intercept = range + radial_velocity * frame * cfg.slow_time_step;
    const double cycles = cfg.carrier_freq * intercept / kSpeedOfLight;
    s.amplitude = cross_section / (range * range) * phasor(-(cycles - std::floor(cycles)));
    return s;
}

std::vector<ScattererState> scatterer_states(const Scenario& scenario, const OfdmConfig& cfg, int frame)
{
    if (frame < 0 || frame >= cfg.n_frames)
        throw std::out_of_range("scatterer_states: frame " + std::to_string(frame) + " outside [0, " +
                                std::to_string(cfg.n_frames) + ")");
    std::vector<ScattererState> out;
    out.reserve(scenario.objects.size() * 5);
    for (const auto& obj : scenario.objects)
        std::visit([&](const auto& o) { emit(out, scenario, cfg, frame, o); }, obj);
    return out;
}

} // namespace mdattack
