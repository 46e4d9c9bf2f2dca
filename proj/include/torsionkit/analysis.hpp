#pragma once

#include "torsionkit/io.hpp"

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace tk {

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_validation = 2, exit_solver = 3, exit_breach = 4 };

struct RunOptions {
    std::optional<Rational> action_bound;
    std::optional<int> hbar_bound;
    std::optional<int> cover_max;
    std::optional<int> exponent_box;
    std::optional<std::vector<Rational>> omega;
    std::optional<int> certify_k;
    std::uint64_t seed = 0;
    int samples = 16;
};

Json options_json(const RunOptions& o);
RunOptions options_from_json(const Json& j);

const std::vector<std::string>& commands();

// Document truncation with command-line overrides applied.
Truncation effective_truncation(const Document& doc, const RunOptions& opts);

// The objects each command works on, built as the commands build them.
SurfaceModel document_surface_model(const Document& doc, const RunOptions& opts);
PlanarModel document_planar_model(const Document& doc, const RunOptions& opts);

struct LabeledComplex {
    std::string label;
    EchComplex cx;
    std::optional<Rational> L;
};

std::vector<LabeledComplex> document_ech_complexes(const Document& doc, const RunOptions& opts);

// Runs one command on a document (or, for validate, on an earlier report).
// Throws ValidationError / SolverError / InvariantBreach.
Json run_analysis(const Json& input, const std::string& command, const RunOptions& opts);

// Structured failure report plus the matching exit code.
std::pair<Json, int> error_report(const std::string& command, const std::exception& e);

std::string render_text(const Json& report);

}  // namespace tk
