#include "oracles.hpp"

#include "mdattack/attack.hpp"
#include "mdattack/channel.hpp"
#include "mdattack/serialization.hpp"

#include <catch_amalgamated.hpp>

using namespace mdattack;
using Catch::Matchers::WithinAbs;

TEST_CASE("schedules")
{
    const auto cfg = make_config(ConfigPreset::Wifi20MHz);
    const AttackParams params;
    CHECK(params.constant == SpoofParams{100.0, 50.0});

    const auto none = make_schedule(AttackScheme::NONE, cfg, params, 1);
    REQUIRE(none.per_frame.size() == 5000);
    for (const auto& sp : none.per_frame)
        CHECK(sp == SpoofParams{0.0, 0.0});

    const auto constant = make_schedule(AttackScheme::CONSTANT, cfg, params, 1);
    for (const auto& sp : constant.per_frame)
        CHECK(sp == SpoofParams{100.0, 50.0});

    const auto random = make_schedule(AttackScheme::RANDOM, cfg, params, 1);
    double f_sum = 0.0;
    double r_sum = 0.0;
    for (const auto& sp : random.per_frame)
    {
        CHECK((sp.doppler >= 50.0 && sp.doppler <= 200.0));
        CHECK((sp.range >= 10.0 && sp.range <= 200.0));
        f_sum += sp.doppler;
        r_sum += sp.range;
    }
    CHECK_THAT(f_sum / 5000, WithinAbs(125.0, 5.0));
    CHECK_THAT(r_sum / 5000, WithinAbs(105.0, 5.0));

    CHECK(make_schedule(AttackScheme::RANDOM, cfg, params, 1).per_frame == random.per_frame);
    CHECK(make_schedule(AttackScheme::RANDOM, cfg, params, 2).per_frame != random.per_frame);
}

TEST_CASE("inverted intervals are rejected")
{
    const auto cfg = make_config(ConfigPreset::Wifi20MHz);
    AttackParams p;
    p.doppler_range = {200.0, 50.0};
    CHECK_THROWS_AS(make_schedule(AttackScheme::RANDOM, cfg, p, 0), ConfigError);
    p = {};
    p.range_range = {10.0, 5.0};
    CHECK_THROWS_AS(make_schedule(AttackScheme::RANDOM, cfg, p, 0), ConfigError);
    CHECK_THROWS_AS(scheme_from_string("SINE"), ConfigError);
    for (auto s : kAllSchemes)
        CHECK(scheme_from_string(to_string(s)) == s);
}

TEST_CASE("pre-coder reference values")
{
    const auto cfg = make_config(ConfigPreset::Wifi20MHz);
    AttackParams p;

    p.constant = {100.0, 50.0};
    auto s = make_schedule(AttackScheme::CONSTANT, cfg, p, 0);
    CHECK(std::abs(precoder_diagonal(s, cfg, 0)(0) - 1.0) < 1e-15);
    CHECK(std::abs(precoder_diagonal(s, cfg, 5)(0) + 1.0) < 1e-12);

    p.constant = {0.0, oracle::c0 / (2 * cfg.subcarrier_spacing)};
    s = make_schedule(AttackScheme::CONSTANT, cfg, p, 0);
    const auto d = precoder_diagonal(s, cfg, 0);
    for (int k = 0; k < cfg.n_subcarriers; ++k)
        CHECK(std::abs(d(k) - std::complex<double>(k % 2 ? -1.0 : 1.0)) < 1e-12);

    CHECK_THROWS_AS(precoder_diagonal(s, cfg, cfg.n_frames), std::out_of_range);
}

TEST_CASE("property: pre-coder matches its closed form and has unit modulus")
{
    const auto cfg = make_config(ConfigPreset::Wifi20MHz);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto s = make_schedule(AttackScheme::RANDOM, cfg, {}, seed);
        for (int m : {0, 1, 999, 4999})
        {
            const auto d = precoder_diagonal(s, cfg, m);
            const auto sp = s.per_frame[m];
            for (int k = 0; k < cfg.n_subcarriers; ++k)
            {
                const auto ref = oracle::expj(2 * oracle::pi *
                                              (sp.doppler * m * cfg.slow_time_step -
                                               k * cfg.subcarrier_spacing * sp.range / oracle::c0));
                CHECK(std::abs(d(k) - ref) < 1e-10);
                CHECK_THAT(std::abs(d(k)), WithinAbs(1.0, 1e-14));
            }
        }
    }
}

TEST_CASE("NONE leaves the symbols bit-exact and attacks preserve magnitude")
{
    const auto cfg = oracle::small_config(64, 50);
    const auto x = generate_symbols(cfg, Constellation::QAM16, 5);
    const auto none = make_schedule(AttackScheme::NONE, cfg, {}, 0);
    CHECK(apply_precoding(x, none, cfg).entries == x.entries);

    const auto rnd = make_schedule(AttackScheme::RANDOM, cfg, {}, 3);
    const auto y = apply_precoding(x, rnd, cfg);
    CHECK((y.entries.cwiseAbs() - x.entries.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);

    SymbolMatrix<double> ones{Eigen::MatrixXcd::Ones(64, 50), Constellation::QPSK};
    CHECK((apply_precoding(ones, rnd, cfg).entries - precoder_matrix(rnd, cfg)).cwiseAbs().maxCoeff() == 0.0);

    SymbolMatrix<double> wrong{Eigen::MatrixXcd::Ones(64, 49), Constellation::QPSK};
    CHECK_THROWS_AS(apply_precoding(wrong, rnd, cfg), DimensionError);
}

TEST_CASE("property: pre-coding then propagation equals propagation with the pre-coder diagonal")
{
    const auto cfg = oracle::small_config(32, 12);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial)
    {
        std::vector<std::vector<ScattererState>> states(cfg.n_frames);
        for (auto& s : states)
            for (int l = 0; l < 3; ++l)
                s.push_back(oracle::path(std::polar(u(rng), 6 * u(rng)), 200 * u(rng), 300 * (u(rng) - 0.5)));
        const auto x = generate_symbols(cfg, Constellation::QPSK, rng());
        const auto sched = make_schedule(AttackScheme::RANDOM, cfg, {}, rng());
        const Eigen::MatrixXcd p = precoder_matrix(sched, cfg);
        const auto a = propagate_frames(apply_precoding(x, sched, cfg), states, cfg).samples;
        const auto b = propagate_frames(x, states, cfg, &p).samples;
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
        const auto ref = oracle::sampled_cube(x.entries, states, cfg, &p);
        CHECK((a - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("schedule JSON round trip")
{
    const auto cfg = oracle::small_config(8, 40);
    const auto s = make_schedule(AttackScheme::RANDOM, cfg, {}, 12);
    const auto with = schedule_from_json(schedule_to_json(s, true));
    const auto without = schedule_from_json(schedule_to_json(s, false));
    CHECK(with.per_frame == s.per_frame);
    CHECK(without.per_frame == s.per_frame);
    CHECK(with.scheme == AttackScheme::RANDOM);
}
