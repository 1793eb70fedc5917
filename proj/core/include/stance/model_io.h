#pragma once

#include <string>
#include <string_view>

#include "stance/cnn.h"
#include "stance/logreg.h"
#include "stance/pmi.h"

namespace stance {

// Line-oriented model dumps. Every file starts with `stance-model 1` and a
// `kind <name>` line; parameter arrays follow as
//
//   tensor <name> <rows> <cols>
//   <row 0 values>
//   ...
//
// Values are written as C99 hexadecimal floats, so load(dump(m)) == m bit for bit.
inline constexpr int kModelFormatVersion = 1;

std::string format_exact(double v);
double parse_exact(std::string_view text);

std::string dump_logreg(const LogRegModel& model);
LogRegModel parse_logreg(std::string_view dump);

std::string dump_cnn(const CnnModel& model, int max_len);
CnnModel parse_cnn(std::string_view dump, int* max_len = nullptr);

std::string dump_pmi(const PmiTable& table);
PmiTable parse_pmi(std::string_view dump);

// Value of the `kind` header line.
std::string peek_model_kind(std::string_view dump);

}  // namespace stance
