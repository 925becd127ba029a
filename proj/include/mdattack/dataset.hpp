#pragma once

// Labeled spectrogram corpus.
//
// On-disk layout of one record "rec_NNNNNN":
//   rec_NNNNNN.bin   "MDSPEC1\0", u32 LE T, u32 LE F, T*F float32 LE (time-major)
//   rec_NNNNNN.json  sidecar: label, scheme, seed, scenario, cfg, stft, floor_db
// and a "manifest.json" array of {file, label, scheme, seed}. Labels live only
// in the sidecar and manifest.

#include "mdattack/attack.hpp"
#include "mdattack/ofdm_waveform.hpp"
#include "mdattack/receiver.hpp"
#include "mdattack/simulation.hpp"
#include "mdattack/target_kinematics.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdattack
{

inline constexpr char kRecordMagic[8] = {'M', 'D', 'S', 'P', 'E', 'C', '1', '\0'};

class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class BadMagicError : public FormatError
{
public:
    using FormatError::FormatError;
};

class RecordShapeError : public FormatError
{
public:
    using FormatError::FormatError;
};

class TruncatedError : public FormatError
{
public:
    using FormatError::FormatError;
};

struct CorpusSpec
{
    int scenarios_per_class = 200;
    std::vector<ClassLabel> classes{kAllClasses.begin(), kAllClasses.end()};
    std::vector<AttackScheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    OfdmConfig cfg = make_config(ConfigPreset::Wifi20MHz);
    std::uint64_t master_seed = 1;
    std::optional<double> snr_db; ///< unset: use cfg.noise_variance
    AttackParams attack;
    StftParams stft;
    Constellation constellation = Constellation::QPSK;
};

void validate(const CorpusSpec& spec);
void to_json(nlohmann::json& j, const CorpusSpec& spec);
void from_json(const nlohmann::json& j, CorpusSpec& spec);

struct CorpusRecord
{
    Spectrogram<float> spectrogram;
    ClassLabel label = ClassLabel::PED;
    AttackScheme scheme = AttackScheme::NONE;
    Scenario scenario;
    std::uint64_t seed = 0;
    std::uint64_t scenario_seed = 0;
};

struct ManifestEntry
{
    std::string file;
    ClassLabel label = ClassLabel::PED;
    AttackScheme scheme = AttackScheme::NONE;
    std::uint64_t seed = 0;
};

/// Seeds of one (class, scheme, index) cell. The scenario seed ignores the
/// scheme so every scheme replays the same movement, symbols and noise.
struct RecordSeeds
{
    std::uint64_t record;
    std::uint64_t scenario;
    std::uint64_t symbols;
    std::uint64_t noise;
    std::uint64_t attack;
};

RecordSeeds record_seeds(std::uint64_t master_seed, ClassLabel label, AttackScheme scheme, int index);

/// Simulates one record without touching the filesystem. `full`, when given,
/// receives the intermediate products of the run.
CorpusRecord make_record(const CorpusSpec& spec, ClassLabel label, AttackScheme scheme, int index,
                         SimulationResult* full = nullptr);

/// Sidecar document for a record produced under `spec`.
nlohmann::json record_sidecar(const CorpusRecord& record, const CorpusSpec& spec);

/// Writes "<stem>.bin" and "<stem>.json" into `dir`.
void write_record(const std::filesystem::path& dir, const std::string& stem, const CorpusRecord& record,
                  const nlohmann::json& sidecar);

/// Reads the spectrogram values of a ".bin" file. Throws BadMagicError,
/// TruncatedError or RecordShapeError (header dims differ from `expected`).
RMatrix<float> read_spectrogram_file(const std::filesystem::path& bin,
                                     std::optional<std::pair<int, int>> expected = std::nullopt);

/// Reads a ".bin" record together with its sidecar.
CorpusRecord read_record(const std::filesystem::path& bin,
                         std::optional<std::pair<int, int>> expected = std::pair{440, 144});

/// Generates every (class, scheme, index) record with `jobs` worker threads
/// (0 = hardware concurrency), stages them, moves them into `out_dir` and
/// writes the manifest last. Output bytes do not depend on `jobs`.
std::vector<ManifestEntry> build_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir, int jobs = 0);

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& corpus_dir);

} // namespace mdattack
