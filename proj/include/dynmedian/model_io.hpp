#pragma once

#include <string>

#include "dynmedian/model.hpp"

namespace dynmedian {

enum class ModelFormat { Mps, LpText };

/// Renders a model to text. MPS uses the classic fixed-field section layout
/// (NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA) with 8-character names; names that
/// collide after truncation raise FormatError listing the offenders. LP text
/// follows CPLEX conventions with names up to 255 characters. Numbers are
/// printed with round-trip precision, so parsing the output recovers the
/// exact coefficients.
std::string export_model(const LinearModel& model, ModelFormat format);

/// Parses text produced by export_model (and straightforward files in the
/// same dialect). Maximization, RANGES sections and general integers are
/// rejected.
LinearModel parse_model(const std::string& text, ModelFormat format);

void write_model(const LinearModel& model, ModelFormat format, const std::string& path);
LinearModel read_model(const std::string& path, ModelFormat format);

}  // namespace dynmedian
