#pragma once

#include <string>

#include "fuzzyblock/anfis/tsk.hpp"

namespace fuzzyblock::anfis {

inline constexpr int kModelSchemaVersion = 1;

// Round-trips bit-exactly: doubles are written in shortest round-trip form.
std::string model_to_json(const TskModel& model, const std::vector<double>& rmse_history = {});
TskModel model_from_json(const std::string& text);

}  // namespace fuzzyblock::anfis
