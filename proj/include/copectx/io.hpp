#pragma once

#include <string>
#include <vector>

#include "copectx/cloning.hpp"
#include "copectx/nmf.hpp"
#include "copectx/solvers.hpp"
#include "json.hpp"

// File formats and report serialization. Every JSON document carries
// "schema": "copectx/1"; CSV is plain comma-separated doubles at full
// round-trip precision.

namespace copectx::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSchema = "copectx/1";

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Fragment JSON: preparations and measurements as labeled states, each state
// either "ket": [[re, im], ...] or "bloch": [theta, phi] (dim-2 shorthand).
Fragment parse_fragment(const std::string& text);
Fragment load_fragment(const std::string& path);
std::string fragment_json(const Fragment& f);

Eigen::MatrixXd parse_matrix_csv(const std::string& text);
Eigen::MatrixXd load_matrix_csv(const std::string& path);
std::string matrix_csv(const Eigen::MatrixXd& m);

// COPE export: entries as CSV plus a .meta.json sidecar with block structure
// and column labels.
void write_cope_csv(const CopeMatrix& c, const std::string& path);
std::string cope_meta_json(const CopeMatrix& c);

nlohmann::ordered_json verdict_json(const Verdict& v);
nlohmann::ordered_json nmf_json(const NmfResult& r);
nlohmann::ordered_json enmf_json(const EnmfSearchResult& r);
nlohmann::ordered_json cloning_json(const CloningReport& r,
                                    bool include_timing = false);

// Columns: c_q, root_low, root_high, closed_form, abs_error.
std::string curve_csv(const std::vector<SuccessCurvePoint>& curve);
// Columns: c, d, fourth_eigenvalue, rank3_flag.
std::string scan_csv(const SdcScanResult& scan);

}  // namespace copectx::io
