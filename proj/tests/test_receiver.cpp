#include "oracles.hpp"

#include "mdattack/attack.hpp"
#include "mdattack/channel.hpp"
#include "mdattack/receiver.hpp"
#include "mdattack/simulation.hpp"

#include <catch_amalgamated.hpp>

#include <numeric>

using namespace mdattack;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

Eigen::VectorXcd tone(double hz, int length, double step = 1e-3)
{
    Eigen::VectorXcd s(length);
    for (int m = 0; m < length; ++m)
        s(m) = oracle::expj(2 * oracle::pi * hz * m * step);
    return s;
}

Spectrogram<double> with_values(RMatrix<double> v)
{
    Spectrogram<double> s;
    s.values = std::move(v);
    s.doppler_step = 1000.0 / 144;
    return s;
}

} // namespace

TEST_CASE("frequency-domain demodulation")
{
    const auto cfg = oracle::small_config(16, 3);
    DataCube<double> zero{Eigen::MatrixXcd::Zero(16, 3), cfg};
    CHECK(demodulate_fd(zero).cwiseAbs().maxCoeff() == 0.0);

    DataCube<double> cube{oracle::random_matrix(16, 3, 2), cfg};
    const auto y = demodulate_fd(cube);
    for (int m = 0; m < 3; ++m)
        CHECK((y.col(m) - oracle::dft(cube.samples.col(m), -1)).cwiseAbs().maxCoeff() < 1e-10);

    DataCube<double> modulated{idft_modulate_columns(cube.samples), cfg};
    CHECK((demodulate_fd(modulated) - cube.samples).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("symbol removal")
{
    const auto cfg = oracle::small_config(64, 8);
    const auto x = generate_symbols(cfg, Constellation::QPSK, 1);
    CHECK((remove_symbols(x.entries, x, cfg).entries.array() - 1.0).abs().maxCoeff() < 1e-15);

    auto bad = x;
    bad.entries(3, 2) = 0.0;
    CHECK_THROWS_AS(remove_symbols(x.entries, bad, cfg), std::domain_error);
    CHECK_THROWS_AS(remove_symbols(Eigen::MatrixXcd(x.entries.leftCols(7)), x, cfg), DimensionError);
}

TEST_CASE("Z of a single path with and without attack")
{
    const auto cfg = oracle::small_config(64, 16);
    const auto x = generate_symbols(cfg, Constellation::QAM16, 8);
    const auto s = oracle::path({0.02, -0.01}, 73.0, 41.0);
    const std::vector<std::vector<ScattererState>> states(cfg.n_frames, {s});

    AttackParams params;
    params.constant = {100.0, 50.0};
    for (auto scheme : {AttackScheme::NONE, AttackScheme::CONSTANT, AttackScheme::RANDOM})
    {
        const auto sched = make_schedule(scheme, cfg, params, 6);
        const auto cube = propagate_frames(apply_precoding(x, sched, cfg), states, cfg);
        const auto z = remove_symbols(demodulate_fd(cube), x, cfg);
        for (int m = 0; m < cfg.n_frames; ++m)
        {
            const auto sp = sched.per_frame[m];
            for (int k = 0; k < cfg.n_subcarriers; ++k)
            {
                const auto ref = s.amplitude *
                                 oracle::expj(2 * oracle::pi *
                                              ((s.doppler + sp.doppler) * m * cfg.slow_time_step -
                                               k * cfg.subcarrier_spacing * (s.bistatic_range + sp.range) / oracle::c0));
                CHECK(std::abs(z.entries(k, m) - ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("subcarrier aggregation")
{
    const auto cfg = oracle::small_config(64, 10);
    ZMatrix<double> ones{Eigen::MatrixXcd::Ones(64, 10), cfg};
    CHECK((aggregate_subcarriers(ones).array() - 64.0).abs().maxCoeff() < 1e-12);

    Eigen::MatrixXcd z(64, 10);
    for (int m = 0; m < 10; ++m)
        z.col(m).setConstant(oracle::expj(2 * oracle::pi * 30.0 * m * cfg.slow_time_step));
    const auto s = aggregate_subcarriers(ZMatrix<double>{z, cfg});
    for (int m = 0; m < 10; ++m)
        CHECK(std::abs(s(m) - 64.0 * oracle::expj(2 * oracle::pi * 30.0 * m * 1e-3)) < 1e-12);

    const Eigen::MatrixXcd a = oracle::random_matrix(64, 10, 1);
    const Eigen::MatrixXcd b = oracle::random_matrix(64, 10, 2);
    const Eigen::VectorXcd sum = aggregate_subcarriers(ZMatrix<double>{a + 2.0 * b, cfg});
    const Eigen::VectorXcd parts = aggregate_subcarriers(ZMatrix<double>{a, cfg}) + 2.0 * aggregate_subcarriers(ZMatrix<double>{b, cfg});
    CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectrogram geometry and axis")
{
    const StftParams p;
    const auto spec = stft_spectrogram(tone(0.0, 5000), p, 1e-3);
    CHECK(spec.n_time() == 440);
    CHECK(spec.n_doppler() == 144);
    CHECK(spec.dc_column() == 71);
    CHECK_THAT(spec.doppler_step, WithinRel(1000.0 / 144, 1e-12));
    CHECK_THAT(spec.doppler_of(0), WithinRel(-71 * 1000.0 / 144, 1e-12));
    CHECK_THAT(spec.doppler_of(143), WithinRel(500.0, 1e-12));
    CHECK_THAT(spec.time_step, WithinRel(0.011, 1e-12));
    CHECK(spec.values.minCoeff() == 0.0);
    CHECK(spec.values.maxCoeff() == 1.0);
    for (int t = 0; t < spec.n_time(); ++t)
    {
        Eigen::Index col;
        spec.values.row(t).maxCoeff(&col);
        CHECK(col == 71);
    }
}

TEST_CASE("a 100 Hz tone peaks at its Doppler bin")
{
    const auto spec = stft_spectrogram(tone(100.0, 5000), StftParams{}, 1e-3);
    const auto r = ridge(spec);
    for (double hz : r)
        CHECK_THAT(hz, WithinAbs(100.0, spec.doppler_step / 2 + 1e-9));
    CHECK(spec.column_of(100.0) == 71 + 14);
}

TEST_CASE("property: tone peaks land within one bin of the tone frequency")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-490.0, 490.0);
    StftParams p;
    p.max_time_bins = 20;
    for (int i = 0; i < 50; ++i)
    {
        const double f0 = u(rng);
        const auto spec = stft_spectrogram(tone(f0, 400), p, 1e-3);
        for (double hz : ridge(spec))
            CHECK(std::abs(hz - f0) <= spec.doppler_step + 1e-9);
    }
}

TEST_CASE("symmetric tone pair gives a spectrogram symmetric about DC")
{
    const Eigen::VectorXcd s = tone(-180.0, 1000) + tone(180.0, 1000);
    const auto spec = stft_spectrogram(s, StftParams{}, 1e-3);
    double worst = 0.0;
    for (int b = 1; b <= 71; ++b)
        worst = std::max(worst, (spec.values.col(71 - b) - spec.values.col(71 + b)).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-10);
}

TEST_CASE("spectrogram edge cases")
{
    const StftParams p;
    const auto zero = stft_spectrogram(Eigen::VectorXcd::Zero(500), p, 1e-3);
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(stft_spectrogram(Eigen::VectorXcd::Zero(100), p, 1e-3), std::invalid_argument);
    StftParams bad;
    bad.fft_len = 64;
    CHECK_THROWS_AS(stft_spectrogram(Eigen::VectorXcd::Zero(500), bad, 1e-3), ConfigError);
    CHECK(centred_source_index(71, 144) == 0);
    CHECK(centred_source_index(70, 144) == 143);
    CHECK(centred_source_index(143, 144) == 72);
}

TEST_CASE("dB normalization keeps the floor below the peak")
{
    Eigen::MatrixXd power(2, 3);
    power << 1.0, 1e-3, 1e-9, 0.0, 1e-6, 0.5;
    const auto v = normalize_db<double>(power, 60.0);
    CHECK(v(0, 0) == 1.0);
    CHECK(v.minCoeff() == 0.0);
    CHECK_THAT(v(0, 1), WithinAbs(0.5, 1e-12)); // -30 dB of 60
    CHECK(v(0, 2) == 0.0);
    CHECK(v(1, 1) == 0.0);
}

TEST_CASE("spectral entropy reference values")
{
    RMatrix<double> peaked = RMatrix<double>::Zero(10, 144);
    peaked.col(5).setOnes();
    CHECK(spectral_entropy(with_values(peaked)) == 0.0);

    const RMatrix<double> flat = RMatrix<double>::Ones(10, 144);
    CHECK_THAT(spectral_entropy(with_values(flat)), WithinAbs(std::log2(144.0), 1e-12));

    RMatrix<double> two = RMatrix<double>::Zero(4, 144);
    two.col(1).setConstant(0.5);
    two.col(9).setConstant(0.5);
    CHECK_THAT(spectral_entropy(with_values(two)), WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(spectral_entropy(with_values(RMatrix<double>::Zero(4, 144))), std::domain_error);
}

TEST_CASE("range-Doppler map peaks at the path's range and Doppler")
{
    auto cfg = oracle::small_config(64, 500);
    const double r = 95.0;
    const double fd = 31.0;
    Eigen::MatrixXcd z(64, 500);
    for (int m = 0; m < 500; ++m)
        for (int k = 0; k < 64; ++k)
            z(k, m) = oracle::expj(2 * oracle::pi *
                                   (fd * m * cfg.slow_time_step - k * cfg.subcarrier_spacing * r / oracle::c0));
    const auto map = range_doppler_map(ZMatrix<double>{z, cfg});
    CHECK_THAT(map.range_step, WithinRel(oracle::c0 / 20e6, 1e-12));
    CHECK_THAT(map.doppler_step, WithinRel(2.0, 1e-12));
    Eigen::Index row, col;
    map.values.maxCoeff(&row, &col);
    CHECK(std::abs(map.range_of(row) - r) <= map.range_step / 2 + 1e-9);
    CHECK(std::abs(map.doppler_of(col) - fd) <= map.doppler_step / 2 + 1e-9);

    const auto zero = range_doppler_map(ZMatrix<double>{Eigen::MatrixXcd::Zero(64, 500), cfg});
    CHECK(zero.values.maxCoeff() == 0.0);
}

namespace
{

struct Link
{
    OfdmConfig cfg;
    SymbolMatrix<double> preamble;
    SymbolMatrix<double> payload;
    std::vector<std::vector<ScattererState>> states;
};

Link make_link(std::uint64_t seed, Constellation c)
{
    Link l;
    l.cfg = oracle::small_config(64, 40);
    l.preamble = generate_symbols(l.cfg, Constellation::QPSK, seed);
    l.payload = generate_symbols(l.cfg, c, seed + 1);
    l.states.assign(l.cfg.n_frames, {oracle::path({1e-3, 2e-3}, 60.0 + seed, 0.0)});
    return l;
}

} // namespace

TEST_CASE("noise-free equalization recovers the payload under attack")
{
    for (auto c : {Constellation::QPSK, Constellation::QAM16})
    {
        const auto l = make_link(3, c);
        const auto pts = alphabet<double>(c);
        for (auto scheme : kAllSchemes)
        {
            const auto sched = make_schedule(scheme, l.cfg, {}, 9);
            const auto pre = propagate_frames(apply_precoding(l.preamble, sched, l.cfg), l.states, l.cfg);
            const auto pay = propagate_frames(apply_precoding(l.payload, sched, l.cfg), l.states, l.cfg);
            const auto r = equalize_and_demap(pre, l.preamble, pay, c);
            CHECK(r.evm < 1e-10);
            for (int m = 0; m < l.cfg.n_frames; ++m)
                for (int k = 0; k < 64; ++k)
                    CHECK(pts[r.decisions(k, m)] == l.payload.entries(k, m));
        }
    }
}

TEST_CASE("with independent noise the attack does not change the EVM distribution")
{
    const auto l = make_link(5, Constellation::QPSK);
    const double var = 1e-8;
    std::vector<double> evm[2];
    for (int i = 0; i < 2; ++i)
    {
        const auto sched = make_schedule(i ? AttackScheme::RANDOM : AttackScheme::NONE, l.cfg, {}, 2);
        for (std::uint64_t seed = 0; seed < 20; ++seed)
        {
            const auto pre = add_awgn(propagate_frames(apply_precoding(l.preamble, sched, l.cfg), l.states, l.cfg),
                                      var, 1000 + seed);
            const auto pay = add_awgn(propagate_frames(apply_precoding(l.payload, sched, l.cfg), l.states, l.cfg),
                                      var, 2000 + seed);
            evm[i].push_back(equalize_and_demap(pre, l.preamble, pay, Constellation::QPSK).evm);
        }
    }
    const double a = std::accumulate(evm[0].begin(), evm[0].end(), 0.0) / 20;
    const double b = std::accumulate(evm[1].begin(), evm[1].end(), 0.0) / 20;
    CHECK_THAT(b, WithinRel(a, 0.05));
}

TEST_CASE("simulation replays identically and RANDOM spreads the spectrum")
{
    const auto cfg = make_config(ConfigPreset::Wifi20MHz);
    const auto sc = sample_scenario(ClassLabel::PED, 0, ScenarioDraw::Nominal);
    SimulationOptions opt;
    opt.symbol_seed = 4;
    opt.noise_seed = 5;
    const auto none = simulate(sc, make_schedule(AttackScheme::NONE, cfg, {}, 1), cfg, opt);
    const auto again = simulate(sc, make_schedule(AttackScheme::NONE, cfg, {}, 1), cfg, opt);
    CHECK(none.spectrogram.values == again.spectrogram.values);
    const auto rnd = simulate(sc, make_schedule(AttackScheme::RANDOM, cfg, {}, 1), cfg, opt);
    CHECK(spectral_entropy(rnd.spectrogram) > spectral_entropy(none.spectrogram));
    CHECK(none.spectrogram.values.allFinite());
    CHECK(none.spectrogram.values.minCoeff() >= 0.0);
    CHECK(none.spectrogram.values.maxCoeff() <= 1.0);
}
