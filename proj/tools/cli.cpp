#include "cli.hpp"

#include "mdattack/dataset.hpp"
#include "mdattack/plot.hpp"
#include "mdattack/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

namespace mdattack::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Default configuration document. Its key set is the set of keys that config
/// files and --set overrides may reference.
json default_document()
{
    json doc = CorpusSpec{};
    doc["simulate"] = {{"class", "PED"}, {"scheme", "NONE"}, {"seed", 0}, {"plot", false}};
    doc["jobs"] = 0;
    return doc;
}

void merge_checked(json& base, const json& patch, const std::string& where)
{
    if (!patch.is_object())
        throw UsageError(where + ": expected a JSON object");
    for (const auto& [key, value] : patch.items())
    {
        auto it = base.find(key);
        if (it == base.end())
            throw UsageError("unknown config key '" + where + key + "'");
        if (it->is_object() && value.is_object())
            merge_checked(*it, value, where + key + ".");
        else
            *it = value;
    }
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("override '" + assignment + "' is not key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    std::string pointer;
    for (char c : key)
        pointer += c == '.' ? '/' : c;
    const json::json_pointer ptr("/" + pointer);
    if (!doc.contains(ptr))
        throw UsageError("unknown config key '" + key + "'");
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded())
        value = raw;
    doc[ptr] = value;
}

json load_document(const std::string& config_file, const std::vector<std::string>& overrides)
{
    json doc = default_document();
    if (!config_file.empty())
    {
        std::ifstream in(config_file);
        if (!in)
            throw UsageError("cannot open config file '" + config_file + "'");
        json file = json::parse(in, nullptr, false);
        if (file.is_discarded())
            throw UsageError("config file '" + config_file + "' is not valid JSON");
        merge_checked(doc, file, "");
    }
    for (const auto& o : overrides)
        apply_override(doc, o);
    return doc;
}

struct Summary
{
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

Summary summarize(const std::vector<double>& v)
{
    Summary s;
    s.count = v.size();
    if (v.empty())
        return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - s.mean) * (x - s.mean);
    s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    return s;
}

int cmd_simulate(const json& doc, const fs::path& out_dir, std::ostream& err)
{
    CorpusSpec spec = doc.get<CorpusSpec>();
    const auto& sim = doc.at("simulate");
    const auto label = class_from_string(sim.at("class").get<std::string>());
    const auto scheme = scheme_from_string(sim.at("scheme").get<std::string>());
    spec.master_seed = sim.at("seed").get<std::uint64_t>();
    validate(spec.cfg);

    SimulationResult full;
    const auto rec = make_record(spec, label, scheme, 0, &full);
    fs::create_directories(out_dir);
    write_record(out_dir, "rec_000000", rec, record_sidecar(rec, spec));
    err << "wrote " << (out_dir / "rec_000000.bin").string() << "\n";

    if (sim.at("plot").get<bool>())
    {
        const std::string tag = std::string(to_string(label)) + " / " + std::string(to_string(scheme));
        plot_spectrogram(out_dir / "rec_000000.svg", rec.spectrogram, "Spectrogram " + tag);
        plot_range_doppler(out_dir / "rec_000000_range_doppler.svg", range_doppler_map(full.z),
                           "Range-Doppler " + tag);
        err << "wrote plots to " << out_dir.string() << "\n";
    }
    return 0;
}

int cmd_corpus(const json& doc, const fs::path& out_dir, std::ostream& err)
{
    const CorpusSpec spec = doc.get<CorpusSpec>();
    const int jobs = doc.at("jobs").get<int>();
    const auto manifest = build_corpus(spec, out_dir, jobs);
    err << "wrote " << manifest.size() << " records to " << out_dir.string() << "\n";
    return 0;
}

int cmd_plot(const fs::path& record, const fs::path& out, std::ostream& err)
{
    const auto rec = read_record(record, std::nullopt);
    plot_spectrogram(out, rec.spectrogram,
                     "Spectrogram " + std::string(to_string(rec.label)) + " / " + std::string(to_string(rec.scheme)));
    err << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_metrics(const fs::path& corpus, std::ostream& out)
{
    struct Item
    {
        CorpusRecord rec;
        double entropy;
    };
    std::vector<Item> items;
    for (const auto& e : read_manifest(corpus))
    {
        auto rec = read_record(corpus / e.file, std::nullopt);
        const double h = spectral_entropy(rec.spectrogram);
        items.push_back({std::move(rec), h});
    }

    std::map<std::string, std::vector<double>> entropy;
    std::map<std::pair<ClassLabel, std::uint64_t>, const Item*> baseline;
    for (const auto& it : items)
    {
        entropy[std::string(to_string(it.rec.scheme))].push_back(it.entropy);
        if (it.rec.scheme == AttackScheme::NONE)
            baseline[{it.rec.label, it.rec.scenario_seed}] = &it;
    }

    struct Paired
    {
        std::vector<double> gain;
        std::vector<double> shift;
        int above = 0;
    };
    std::map<std::string, Paired> paired;
    for (const auto& it : items)
    {
        if (it.rec.scheme == AttackScheme::NONE)
            continue;
        auto b = baseline.find({it.rec.label, it.rec.scenario_seed});
        if (b == baseline.end())
            continue;
        auto& p = paired[std::string(to_string(it.rec.scheme))];
        p.gain.push_back(it.entropy - b->second->entropy);
        p.above += it.entropy > b->second->entropy ? 1 : 0;
        const auto r_att = ridge(it.rec.spectrogram);
        const auto r_ref = ridge(b->second->rec.spectrogram);
        const std::size_t n = std::min(r_att.size(), r_ref.size());
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            acc += r_att[t] - r_ref[t];
        p.shift.push_back(n ? acc / static_cast<double>(n) : 0.0);
    }

    json report;
    report["records"] = items.size();
    for (const auto& [scheme, v] : entropy)
    {
        const auto s = summarize(v);
        report["schemes"][scheme] = {{"count", s.count},         {"entropy_mean_bits", s.mean},
                                     {"entropy_std_bits", s.stddev}, {"entropy_min_bits", s.min},
                                     {"entropy_max_bits", s.max}};
    }
    for (const auto& [scheme, p] : paired)
    {
        const auto g = summarize(p.gain);
        const auto sh = summarize(p.shift);
        report["paired_vs_none"][scheme] = {
            {"pairs", g.count},
            {"entropy_gain_mean_bits", g.mean},
            {"fraction_entropy_above_none", g.count ? static_cast<double>(p.above) / static_cast<double>(g.count) : 0.0},
            {"ridge_shift_mean_hz", sh.mean},
            {"ridge_shift_std_hz", sh.stddev}};
    }
    out << report.dump(2) << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Micro-Doppler attack simulator for OFDM passive sensing", "mdattack"};
    app.require_subcommand(1);

    std::string config_file;
    std::vector<std::string> overrides;
    std::string out_path;

    auto* sim = app.add_subcommand("simulate", "Simulate one scenario and write one record");
    std::string cls, scheme;
    std::uint64_t seed = 0;
    bool plot = false;
    sim->add_option("--config", config_file, "JSON config file");
    sim->add_option("--set", overrides, "Override a config key, e.g. cfg.n_frames=2000");
    sim->add_option("--class", cls, "PED, BIC, PED_BIC, PED_PED or BIC_BIC (simulate.class)");
    sim->add_option("--scheme", scheme, "NONE, CONSTANT or RANDOM (simulate.scheme)");
    sim->add_option("--seed", seed, "Scenario seed (simulate.seed)");
    sim->add_flag("--plot", plot, "Also write spectrogram and range-Doppler SVGs (simulate.plot)");
    sim->add_option("--out", out_path, "Output directory")->required();

    auto* corpus = app.add_subcommand("corpus", "Build a labeled spectrogram corpus");
    int jobs = -1;
    corpus->add_option("--spec,--config", config_file, "JSON corpus spec / config file");
    corpus->add_option("--set", overrides, "Override a config key, e.g. scenarios_per_class=10");
    corpus->add_option("--seed", seed, "Master seed (master_seed)");
    corpus->add_option("--jobs", jobs, "Worker threads, 0 = all cores (jobs)");
    corpus->add_option("--out", out_path, "Output directory")->required();

    auto* plt = app.add_subcommand("plot", "Render a record's spectrogram to an SVG image");
    std::string record;
    plt->add_option("--record", record, "Record .bin file")->required();
    plt->add_option("--out", out_path, "Output .svg file")->required();

    auto* met = app.add_subcommand("metrics", "Print spectral entropy and ridge-shift statistics as JSON");
    std::string corpus_dir;
    met->add_option("--corpus", corpus_dir, "Corpus directory containing manifest.json")->required();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try
    {
        if (sim->parsed())
        {
            json doc = load_document(config_file, overrides);
            if (!cls.empty())
                doc["simulate"]["class"] = cls;
            if (!scheme.empty())
                doc["simulate"]["scheme"] = scheme;
            if (sim->count("--seed"))
                doc["simulate"]["seed"] = seed;
            if (plot)
                doc["simulate"]["plot"] = true;
            // Validate names early so typos are usage errors.
            class_from_string(doc["simulate"]["class"].get<std::string>());
            scheme_from_string(doc["simulate"]["scheme"].get<std::string>());
            return cmd_simulate(doc, out_path, err);
        }
        if (corpus->parsed())
        {
            json doc = load_document(config_file, overrides);
            if (corpus->count("--seed"))
                doc["master_seed"] = seed;
            if (jobs >= 0)
                doc["jobs"] = jobs;
            validate(doc.get<CorpusSpec>());
            return cmd_corpus(doc, out_path, err);
        }
        if (plt->parsed())
            return cmd_plot(record, out_path, err);
        if (met->parsed())
            return cmd_metrics(corpus_dir, out);
    }
    catch (const UsageError& e)
    {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const nlohmann::json::exception& e)
    {
        err << "error: bad configuration value: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace mdattack::cli
