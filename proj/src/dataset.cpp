#include "mdattack/dataset.hpp"

#include "mdattack/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace mdattack
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

enum SeedTag : std::uint64_t
{
    kScenarioTag = 0x5C,
    kSymbolTag = 0x5B,
    kNoiseTag = 0x4E,
    kAttackTag = 0xA7,
};

std::uint64_t class_index(ClassLabel c)
{
    return static_cast<std::uint64_t>(c);
}

std::uint64_t scheme_index(AttackScheme s)
{
    return static_cast<std::uint64_t>(s);
}

void put_u32(std::string& buf, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p)
{
    return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
           (std::uint32_t{p[3]} << 24);
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("short write to " + path.string());
}

std::string record_stem(std::size_t ordinal)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "rec_%06zu", ordinal);
    return buf;
}

int available_time_bins(const OfdmConfig& cfg, const StftParams& stft)
{
    if (cfg.n_frames < stft.window_len)
        return 0;
    return (cfg.n_frames - stft.window_len) / stft.hop + 1;
}

} // namespace

void validate(const CorpusSpec& spec)
{
    if (spec.scenarios_per_class < 1)
        throw ConfigError("corpus: scenarios_per_class >= 1 violated");
    if (spec.classes.empty())
        throw ConfigError("corpus: at least one class required");
    if (spec.schemes.empty())
        throw ConfigError("corpus: at least one scheme required");
    validate(spec.cfg);
    if (spec.stft.max_time_bins > 0 && available_time_bins(spec.cfg, spec.stft) < spec.stft.max_time_bins)
        throw ConfigError("corpus: " + std::to_string(spec.cfg.n_frames) + " frames give fewer than " +
                          std::to_string(spec.stft.max_time_bins) + " STFT time bins");
}

void to_json(json& j, const CorpusSpec& s)
{
    json classes = json::array();
    for (auto c : s.classes)
        classes.push_back(std::string(to_string(c)));
    json schemes = json::array();
    for (auto sc : s.schemes)
        schemes.push_back(std::string(to_string(sc)));
    j = json{{"scenarios_per_class", s.scenarios_per_class},
             {"classes", classes},
             {"schemes", schemes},
             {"cfg", s.cfg},
             {"master_seed", s.master_seed},
             {"snr_db", s.snr_db ? json(*s.snr_db) : json(nullptr)},
             {"attack", s.attack},
             {"stft", s.stft},
             {"constellation", std::string(to_string(s.constellation))}};
}

void from_json(const json& j, CorpusSpec& s)
{
    if (j.contains("scenarios_per_class"))
        s.scenarios_per_class = j.at("scenarios_per_class").get<int>();
    if (j.contains("classes"))
    {
        s.classes.clear();
        for (const auto& c : j.at("classes"))
            s.classes.push_back(class_from_string(c.get<std::string>()));
    }
    if (j.contains("schemes"))
    {
        s.schemes.clear();
        for (const auto& c : j.at("schemes"))
            s.schemes.push_back(scheme_from_string(c.get<std::string>()));
    }
    if (j.contains("cfg"))
        j.at("cfg").get_to(s.cfg);
    if (j.contains("master_seed"))
        s.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("snr_db"))
        s.snr_db = j.at("snr_db").is_null() ? std::nullopt : std::optional<double>(j.at("snr_db").get<double>());
    if (j.contains("attack"))
        j.at("attack").get_to(s.attack);
    if (j.contains("stft"))
        j.at("stft").get_to(s.stft);
    if (j.contains("constellation"))
        s.constellation = constellation_from_string(j.at("constellation").get<std::string>());
}

RecordSeeds record_seeds(std::uint64_t master_seed, ClassLabel label, AttackScheme scheme, int index)
{
    const auto c = class_index(label);
    const auto i = static_cast<std::uint64_t>(index);
    RecordSeeds s{};
    s.record = derive_seed(master_seed, {c, scheme_index(scheme), i});
    s.scenario = derive_seed(master_seed, {kScenarioTag, c, i});
    s.symbols = derive_seed(s.scenario, {kSymbolTag});
    s.noise = derive_seed(s.scenario, {kNoiseTag});
    s.attack = derive_seed(s.record, {kAttackTag});
    return s;
}

CorpusRecord make_record(const CorpusSpec& spec, ClassLabel label, AttackScheme scheme, int index,
                         SimulationResult* full)
{
    const RecordSeeds seeds = record_seeds(spec.master_seed, label, scheme, index);

    CorpusRecord rec;
    rec.label = label;
    rec.scheme = scheme;
    rec.seed = seeds.record;
    rec.scenario_seed = seeds.scenario;
    rec.scenario = sample_scenario(label, seeds.scenario);

    SimulationOptions opt;
    opt.stft = spec.stft;
    opt.constellation = spec.constellation;
    opt.snr_db = spec.snr_db;
    opt.symbol_seed = seeds.symbols;
    opt.noise_seed = seeds.noise;

    const auto schedule = make_schedule(scheme, spec.cfg, spec.attack, seeds.attack);
    auto sim = simulate(rec.scenario, schedule, spec.cfg, opt);

    const auto& s = sim.spectrogram;
    rec.spectrogram.values = s.values.cast<float>();
    rec.spectrogram.time_step = s.time_step;
    rec.spectrogram.time_origin = s.time_origin;
    rec.spectrogram.doppler_step = s.doppler_step;
    rec.spectrogram.params = s.params;
    if (full)
        *full = std::move(sim);
    return rec;
}

json record_sidecar(const CorpusRecord& record, const CorpusSpec& spec)
{
    AttackSchedule schedule_meta;
    schedule_meta.scheme = record.scheme;
    schedule_meta.rng_seed = derive_seed(record.seed, {kAttackTag});
    schedule_meta.doppler_range = spec.attack.doppler_range;
    schedule_meta.range_range = spec.attack.range_range;
    json attack = schedule_to_json(schedule_meta, false);
    attack["n_frames"] = spec.cfg.n_frames;
    if (record.scheme == AttackScheme::CONSTANT)
        attack["constant"] = {spec.attack.constant.doppler, spec.attack.constant.range};

    const auto& sp = record.spectrogram;
    return json{{"label", std::string(to_string(record.label))},
                {"scheme", std::string(to_string(record.scheme))},
                {"seed", record.seed},
                {"scenario_seed", record.scenario_seed},
                {"scenario", record.scenario},
                {"cfg", spec.cfg},
                {"stft", sp.params},
                {"floor_db", sp.params.floor_db},
                {"snr_db", spec.snr_db ? json(*spec.snr_db) : json(nullptr)},
                {"constellation", std::string(to_string(spec.constellation))},
                {"attack", attack},
                {"axes",
                 {{"time_step_s", sp.time_step},
                  {"time_origin_s", sp.time_origin},
                  {"doppler_step_hz", sp.doppler_step},
                  {"dc_column", sp.dc_column()}}}};
}

void write_record(const fs::path& dir, const std::string& stem, const CorpusRecord& record, const json& sidecar)
{
    const auto& v = record.spectrogram.values;
    std::string buf(kRecordMagic, kRecordMagic + 8);
    buf.reserve(16 + 4 * v.size());
    put_u32(buf, static_cast<std::uint32_t>(v.rows()));
    put_u32(buf, static_cast<std::uint32_t>(v.cols()));
    for (Eigen::Index t = 0; t < v.rows(); ++t)
        for (Eigen::Index f = 0; f < v.cols(); ++f)
            put_u32(buf, std::bit_cast<std::uint32_t>(v(t, f)));
    write_file(dir / (stem + ".bin"), buf);
    write_file(dir / (stem + ".json"), sidecar.dump(2) + "\n");
}

RMatrix<float> read_spectrogram_file(const fs::path& bin, std::optional<std::pair<int, int>> expected)
{
    const std::string bytes = slurp(bin);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kRecordMagic, 8) != 0)
        throw BadMagicError(bin.string() + ": not an MDSPEC1 record (bad magic)");
    if (bytes.size() < 16)
        throw TruncatedError(bin.string() + ": truncated header");
    const std::uint32_t rows = get_u32(p + 8);
    const std::uint32_t cols = get_u32(p + 12);
    if (expected && (static_cast<int>(rows) != expected->first || static_cast<int>(cols) != expected->second))
        throw RecordShapeError(bin.string() + ": record is " + std::to_string(rows) + "x" + std::to_string(cols) +
                               ", expected " + std::to_string(expected->first) + "x" +
                               std::to_string(expected->second));
    const std::uint64_t want = 16 + 4ULL * rows * cols;
    if (bytes.size() < want)
        throw TruncatedError(bin.string() + ": payload truncated (" + std::to_string(bytes.size()) + " of " +
                             std::to_string(want) + " bytes)");
    if (bytes.size() > want)
        throw FormatError(bin.string() + ": trailing bytes after payload");

    RMatrix<float> v(rows, cols);
    const unsigned char* q = p + 16;
    for (std::uint32_t t = 0; t < rows; ++t)
        for (std::uint32_t f = 0; f < cols; ++f, q += 4)
            v(t, f) = std::bit_cast<float>(get_u32(q));
    return v;
}

CorpusRecord read_record(const fs::path& bin, std::optional<std::pair<int, int>> expected)
{
    CorpusRecord rec;
    rec.spectrogram.values = read_spectrogram_file(bin, expected);

    fs::path side = bin;
    side.replace_extension(".json");
    json j;
    try
    {
        j = json::parse(slurp(side));
    }
    catch (const json::exception& e)
    {
        throw FormatError(side.string() + ": bad sidecar: " + e.what());
    }
    rec.label = class_from_string(j.at("label").get<std::string>());
    rec.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.scenario_seed = j.value("scenario_seed", std::uint64_t{0});
    rec.scenario = j.at("scenario").get<Scenario>();
    rec.spectrogram.params = j.at("stft").get<StftParams>();
    const auto& axes = j.at("axes");
    rec.spectrogram.time_step = axes.at("time_step_s").get<double>();
    rec.spectrogram.time_origin = axes.at("time_origin_s").get<double>();
    rec.spectrogram.doppler_step = axes.at("doppler_step_hz").get<double>();
    return rec;
}

std::vector<ManifestEntry> build_corpus(const CorpusSpec& spec, const fs::path& out_dir, int jobs)
{
    validate(spec);

    struct Cell
    {
        ClassLabel label;
        AttackScheme scheme;
        int index;
    };
    std::vector<Cell> cells;
    for (auto c : spec.classes)
        for (auto s : spec.schemes)
            for (int i = 0; i < spec.scenarios_per_class; ++i)
                cells.push_back({c, s, i});

    fs::create_directories(out_dir);
    const fs::path staging = out_dir / ".staging";
    fs::remove_all(staging);
    fs::create_directories(staging);

    std::vector<ManifestEntry> manifest(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++)
        {
            const Cell& cell = cells[i];
            try
            {
                const auto rec = make_record(spec, cell.label, cell.scheme, cell.index);
                const std::string stem = record_stem(i);
                write_record(staging, stem, rec, record_sidecar(rec, spec));
                manifest[i] = {stem + ".bin", cell.label, cell.scheme, rec.seed};
            }
            catch (const std::exception& e)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::make_exception_ptr(std::runtime_error(
                        "record " + std::string(to_string(cell.label)) + "/" + std::string(to_string(cell.scheme)) +
                        "/" + std::to_string(cell.index) + ": " + e.what()));
                next = cells.size();
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(jobs > 0 ? static_cast<std::size_t>(jobs) : hw, cells.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (first_error)
    {
        fs::remove_all(staging);
        std::rethrow_exception(first_error);
    }

    for (const auto& e : manifest)
    {
        for (const char* ext : {".bin", ".json"})
        {
            fs::path name = fs::path(e.file).replace_extension(ext);
            fs::rename(staging / name, out_dir / name);
        }
    }
    fs::remove_all(staging);

    json m = json::array();
    for (const auto& e : manifest)
        m.push_back({{"file", e.file},
                     {"label", std::string(to_string(e.label))},
                     {"scheme", std::string(to_string(e.scheme))},
                     {"seed", e.seed}});
    write_file(out_dir / "manifest.json.tmp", m.dump(2) + "\n");
    fs::rename(out_dir / "manifest.json.tmp", out_dir / "manifest.json");
    return manifest;
}

std::vector<ManifestEntry> read_manifest(const fs::path& corpus_dir)
{
    const json m = json::parse(slurp(corpus_dir / "manifest.json"));
    std::vector<ManifestEntry> out;
    for (const auto& e : m)
        out.push_back({e.at("file").get<std::string>(), class_from_string(e.at("label").get<std::string>()),
                       scheme_from_string(e.at("scheme").get<std::string>()), e.at("seed").get<std::uint64_t>()});
    return out;
}

} // namespace mdattack
