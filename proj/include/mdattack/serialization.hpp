#pragma once

// JSON mappings for configuration and metadata types. Field names follow the
// struct members; every quantity is in SI units (Hz, s, m, m/s, degrees for
// headings). Reading fills missing fields from the struct defaults.

#include "mdattack/attack.hpp"
#include "mdattack/ofdm_waveform.hpp"
#include "mdattack/receiver.hpp"
#include "mdattack/target_kinematics.hpp"

#include <json.hpp>

namespace mdattack
{

void to_json(nlohmann::json& j, const OfdmConfig& cfg);
void from_json(const nlohmann::json& j, OfdmConfig& cfg);

void to_json(nlohmann::json& j, const StftParams& p);
void from_json(const nlohmann::json& j, StftParams& p);

void to_json(nlohmann::json& j, const AttackParams& p);
void from_json(const nlohmann::json& j, AttackParams& p);

void to_json(nlohmann::json& j, const PedestrianParams& p);
void from_json(const nlohmann::json& j, PedestrianParams& p);
void to_json(nlohmann::json& j, const BicyclistParams& b);
void from_json(const nlohmann::json& j, BicyclistParams& b);

void to_json(nlohmann::json& j, const Scenario& sc);
void from_json(const nlohmann::json& j, Scenario& sc);

/// Schedule metadata. The realized per-frame pairs are included only when
/// `with_frames` is set; they can always be regenerated from scheme + seed.
nlohmann::json schedule_to_json(const AttackSchedule& s, bool with_frames);
AttackSchedule schedule_from_json(const nlohmann::json& j);

} // namespace mdattack
