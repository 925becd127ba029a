#include "mdattack/serialization.hpp"

namespace mdattack
{

using nlohmann::json;

namespace
{

json vec3(const Eigen::Vector3d& v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec3(const json& j)
{
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("expected a 3-element position array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json interval(const Interval& i)
{
    return json::array({i.lo, i.hi});
}

Interval interval(const json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("expected a [lo, hi] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read_opt(const json& j, const char* key, T& field)
{
    if (auto it = j.find(key); it != j.end())
        field = it->get<T>();
}

} // namespace

void to_json(json& j, const OfdmConfig& c)
{
    j = json{{"n_subcarriers", c.n_subcarriers},   {"subcarrier_spacing", c.subcarrier_spacing},
             {"sample_rate", c.sample_rate},       {"carrier_freq", c.carrier_freq},
             {"symbol_duration", c.symbol_duration}, {"slow_time_step", c.slow_time_step},
             {"n_frames", c.n_frames},             {"noise_variance", c.noise_variance},
             {"rng_seed", c.rng_seed},             {"bandwidth", c.bandwidth}};
}

void from_json(const json& j, OfdmConfig& c)
{
    read_opt(j, "n_subcarriers", c.n_subcarriers);
    read_opt(j, "subcarrier_spacing", c.subcarrier_spacing);
    read_opt(j, "sample_rate", c.sample_rate);
    read_opt(j, "carrier_freq", c.carrier_freq);
    read_opt(j, "symbol_duration", c.symbol_duration);
    read_opt(j, "slow_time_step", c.slow_time_step);
    read_opt(j, "n_frames", c.n_frames);
    read_opt(j, "noise_variance", c.noise_variance);
    read_opt(j, "rng_seed", c.rng_seed);
    read_opt(j, "bandwidth", c.bandwidth);
}

void to_json(json& j, const StftParams& p)
{
    j = json{{"window_len", p.window_len},
             {"fft_len", p.fft_len},
             {"hop", p.hop},
             {"max_time_bins", p.max_time_bins},
             {"floor_db", p.floor_db}};
}

void from_json(const json& j, StftParams& p)
{
    read_opt(j, "window_len", p.window_len);
    read_opt(j, "fft_len", p.fft_len);
    read_opt(j, "hop", p.hop);
    read_opt(j, "max_time_bins", p.max_time_bins);
    read_opt(j, "floor_db", p.floor_db);
}

void to_json(json& j, const AttackParams& p)
{
    j = json{{"constant_doppler", p.constant.doppler},
             {"constant_range", p.constant.range},
             {"doppler_range", interval(p.doppler_range)},
             {"range_range", interval(p.range_range)}};
}

void from_json(const json& j, AttackParams& p)
{
    read_opt(j, "constant_doppler", p.constant.doppler);
    read_opt(j, "constant_range", p.constant.range);
    if (j.contains("doppler_range"))
        p.doppler_range = interval(j.at("doppler_range"));
    if (j.contains("range_range"))
        p.range_range = interval(j.at("range_range"));
}

void to_json(json& j, const PedestrianParams& p)
{
    j = json{{"type", "pedestrian"},
             {"height", p.height},
             {"speed", p.speed},
             {"heading", p.heading},
             {"location", vec3(p.location)}};
}

void from_json(const json& j, PedestrianParams& p)
{
    read_opt(j, "height", p.height);
    read_opt(j, "speed", p.speed);
    read_opt(j, "heading", p.heading);
    if (j.contains("location"))
        p.location = vec3(j.at("location"));
}

void to_json(json& j, const BicyclistParams& b)
{
    j = json{{"type", "bicyclist"},
             {"speed", b.speed},
             {"heading", b.heading},
             {"location", vec3(b.location)},
             {"gear_ratio", b.gear_ratio},
             {"pedaling", b.pedaling}};
}

void from_json(const json& j, BicyclistParams& b)
{
    read_opt(j, "speed", b.speed);
    read_opt(j, "heading", b.heading);
    if (j.contains("location"))
        b.location = vec3(j.at("location"));
    read_opt(j, "gear_ratio", b.gear_ratio);
    read_opt(j, "pedaling", b.pedaling);
}

void to_json(json& j, const Scenario& sc)
{
    json objects = json::array();
    for (const auto& o : sc.objects)
        std::visit([&](const auto& v) { objects.push_back(v); }, o);
    j = json{{"class_label", std::string(to_string(sc.class_label))},
             {"objects", objects},
             {"tx_pos", vec3(sc.tx_pos)},
             {"rx_pos", vec3(sc.rx_pos)},
             {"area", {{"x", {sc.area.x_min, sc.area.x_max}}, {"y", {sc.area.y_min, sc.area.y_max}}}}};
}

void from_json(const json& j, Scenario& sc)
{
    sc.class_label = class_from_string(j.at("class_label").get<std::string>());
    sc.objects.clear();
    for (const auto& o : j.at("objects"))
    {
        const auto type = o.at("type").get<std::string>();
        if (type == "pedestrian")
            sc.objects.emplace_back(o.get<PedestrianParams>());
        else if (type == "bicyclist")
            sc.objects.emplace_back(o.get<BicyclistParams>());
        else
            throw ConfigError("scenario: unknown object type '" + type + "'");
    }
    if (j.contains("tx_pos"))
        sc.tx_pos = vec3(j.at("tx_pos"));
    if (j.contains("rx_pos"))
        sc.rx_pos = vec3(j.at("rx_pos"));
    if (j.contains("area"))
    {
        const auto x = interval(j.at("area").at("x"));
        const auto y = interval(j.at("area").at("y"));
        sc.area = {x.lo, x.hi, y.lo, y.hi};
    }
}

json schedule_to_json(const AttackSchedule& s, bool with_frames)
{
    json j{{"scheme", std::string(to_string(s.scheme))},
           {"rng_seed", s.rng_seed},
           {"f_range", interval(s.doppler_range)},
           {"r_range", interval(s.range_range)},
           {"n_frames", s.per_frame.size()}};
    if (s.scheme == AttackScheme::CONSTANT && !s.per_frame.empty())
        j["constant"] = {s.per_frame.front().doppler, s.per_frame.front().range};
    if (with_frames)
    {
        json frames = json::array();
        for (const auto& p : s.per_frame)
            frames.push_back({p.doppler, p.range});
        j["per_frame"] = std::move(frames);
    }
    return j;
}

AttackSchedule schedule_from_json(const json& j)
{
    AttackSchedule s;
    s.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    s.rng_seed = j.value("rng_seed", std::uint64_t{0});
    if (j.contains("f_range"))
        s.doppler_range = interval(j.at("f_range"));
    if (j.contains("r_range"))
        s.range_range = interval(j.at("r_range"));
    if (j.contains("per_frame"))
    {
        for (const auto& p : j.at("per_frame"))
            s.per_frame.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return s;
    }
    // Regenerate the realized pairs from scheme, seed and ranges.
    OfdmConfig cfg;
    cfg.n_frames = j.at("n_frames").get<int>();
    AttackParams params;
    params.doppler_range = s.doppler_range;
    params.range_range = s.range_range;
    if (j.contains("constant"))
        params.constant = {j.at("constant").at(0).get<double>(), j.at("constant").at(1).get<double>()};
    return make_schedule(s.scheme, cfg, params, s.rng_seed);
}

} // namespace mdattack
