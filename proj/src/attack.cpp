#include "mdattack/attack.hpp"

#include <algorithm>
#include <random>

namespace mdattack
{

std::string_view to_string(AttackScheme scheme)
{
    switch (scheme)
    {
    case AttackScheme::NONE:
        return "NONE";
    case AttackScheme::CONSTANT:
        return "CONSTANT";
    case AttackScheme::RANDOM:
        return "RANDOM";
    }
    return "?";
}

AttackScheme scheme_from_string(std::string_view name)
{
    for (auto s : kAllSchemes)
        if (to_string(s) == name)
            return s;
    throw ConfigError("unknown attack scheme '" + std::string(name) + "'");
}

AttackSchedule make_schedule(AttackScheme scheme, const OfdmConfig& cfg, const AttackParams& params,
                             std::uint64_t seed)
{
    if (params.doppler_range.lo > params.doppler_range.hi)
        throw ConfigError("attack: doppler range lo <= hi violated");
    if (params.range_range.lo > params.range_range.hi)
        throw ConfigError("attack: range range lo <= hi violated");

    AttackSchedule s;
    s.scheme = scheme;
    s.rng_seed = seed;
    s.doppler_range = params.doppler_range;
    s.range_range = params.range_range;
    s.per_frame.resize(cfg.n_frames);

    switch (scheme)
    {
    case AttackScheme::NONE:
        break;
    case AttackScheme::CONSTANT:
        std::fill(s.per_frame.begin(), s.per_frame.end(), params.constant);
        break;
    case AttackScheme::RANDOM: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> fd(params.doppler_range.lo, params.doppler_range.hi);
        std::uniform_real_distribution<double> rd(params.range_range.lo, params.range_range.hi);
        for (auto& p : s.per_frame)
        {
            p.doppler = fd(rng);
            p.range = rd(rng);
        }
        break;
    }
    }
    return s;
}

} // namespace mdattack
