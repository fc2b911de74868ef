#include "copectx/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace copectx::io {

namespace {

using nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const nlohmann::json& field(const nlohmann::json& j, const char* key,
                            const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

Ket parse_state(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  if (j.contains("ket")) {
    const auto& arr = j["ket"];
    if (!arr.is_array() || arr.empty())
      throw ParseError(where + ".ket: expected a nonempty array");
    std::vector<cplx> amps;
    amps.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& p = arr[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number())
        throw ParseError(where + ".ket[" + std::to_string(i) +
                         "]: expected [re, im]");
      amps.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return Ket(amps);
  }
  if (j.contains("bloch")) {
    const auto& b = j["bloch"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() ||
        !b[1].is_number())
      throw ParseError(where + ".bloch: expected [theta, phi]");
    return bloch_state(b[0].get<double>(), b[1].get<double>());
  }
  throw ParseError(where + ": state needs a \"ket\" or \"bloch\" field");
}

ordered_json state_json(const Ket& k) {
  ordered_json amps = ordered_json::array();
  for (const cplx& a : k.amps())
    amps.push_back(ordered_json::array({a.real(), a.imag()}));
  return ordered_json{{"ket", amps}};
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (long long i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (long long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

Fragment parse_fragment(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("fragment JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("fragment JSON: expected an object");
  if (j.value("schema", "") != kSchema)
    throw ParseError(std::string("fragment JSON: schema must be \"") +
                     kSchema + "\"");
  Fragment f;
  const auto& preps = field(j, "preparations", "fragment");
  if (!preps.is_array() || preps.empty())
    throw ParseError("preparations: expected a nonempty array");
  for (std::size_t i = 0; i < preps.size(); ++i) {
    const std::string where = "preparations[" + std::to_string(i) + "]";
    const auto& label = field(preps[i], "label", where);
    if (!label.is_string()) throw ParseError(where + ".label: expected a string");
    f.preparations.push_back(
        {label.get<std::string>(), parse_state(preps[i], where)});
  }
  const auto& meas = field(j, "measurements", "fragment");
  if (!meas.is_array() || meas.empty())
    throw ParseError("measurements: expected a nonempty array");
  for (std::size_t i = 0; i < meas.size(); ++i) {
    const std::string where = "measurements[" + std::to_string(i) + "]";
    const auto& label = field(meas[i], "label", where);
    if (!label.is_string()) throw ParseError(where + ".label: expected a string");
    f.measurements.push_back(
        {label.get<std::string>(), parse_state(meas[i], where)});
  }
  f.validate();
  return f;
}

Fragment load_fragment(const std::string& path) {
  return parse_fragment(read_file(path));
}

std::string fragment_json(const Fragment& f) {
  ordered_json j;
  j["schema"] = kSchema;
  j["type"] = "fragment";
  j["dim"] = f.dim();
  j["preparations"] = ordered_json::array();
  for (const auto& p : f.preparations)
    j["preparations"].push_back(
        ordered_json{{"label", p.label}, {"ket", state_json(p.state)["ket"]}});
  j["measurements"] = ordered_json::array();
  for (const auto& m : f.measurements)
    j["measurements"].push_back(ordered_json{
        {"label", m.label}, {"ket", state_json(m.yes_effect)["ket"]}});
  return j.dump(2) + "\n";
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string tok;
    std::size_t colno = 0;
    while (std::getline(ls, tok, ',')) {
      ++colno;
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        while (used < tok.size() &&
               std::isspace(static_cast<unsigned char>(tok[used])))
          ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("matrix CSV line " + std::to_string(lineno) +
                         ", column " + std::to_string(colno) +
                         ": not a number: \"" + tok + "\"");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("matrix CSV line " + std::to_string(lineno) +
                       ": expected " + std::to_string(rows.front().size()) +
                       " columns, got " + std::to_string(row.size()));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix CSV: no data rows");
  Eigen::MatrixXd m(static_cast<long long>(rows.size()),
                    static_cast<long long>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<long long>(i), static_cast<long long>(j)) = rows[i][j];
  return m;
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  return parse_matrix_csv(read_file(path));
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (long long i = 0; i < m.rows(); ++i) {
    for (long long j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += fmt(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_cope_csv(const CopeMatrix& c, const std::string& path) {
  write_file(path, matrix_csv(c.entries));
  write_file(path + ".meta.json", cope_meta_json(c));
}

std::string cope_meta_json(const CopeMatrix& c) {
  ordered_json j;
  j["schema"] = kSchema;
  j["type"] = "cope_meta";
  j["blocks"] = ordered_json::array();
  for (const auto& b : c.block_structure)
    j["blocks"].push_back(ordered_json{{"label", b.label}, {"rows", b.rows}});
  j["column_labels"] = c.column_labels;
  return j.dump(2) + "\n";
}

nlohmann::ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["schema"] = kSchema;
  j["type"] = "verdict";
  j["outcome"] = to_string(v.outcome);
  j["cope_rank"] = v.cope_rank;
  j["bound_l"] = v.bound_l;
  j["n"] = v.n;
  j["hypothesis_ok"] = v.hypothesis_ok;
  j["chain"] = v.chain;
  j["singular_values"] = v.singular_values;
  return j;
}

nlohmann::ordered_json nmf_json(const NmfResult& r) {
  ordered_json j;
  j["schema"] = kSchema;
  j["type"] = "nmf_result";
  j["rows"] = r.response.rows();
  j["cols"] = r.epistemic.cols();
  j["k"] = r.k;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["seed"] = r.seed;
  j["response"] = matrix_json(r.response);
  j["epistemic"] = matrix_json(r.epistemic);
  return j;
}

nlohmann::ordered_json enmf_json(const EnmfSearchResult& r) {
  ordered_json j;
  j["schema"] = kSchema;
  j["type"] = "enmf_search";
  j["k"] = r.k;
  j["found"] = r.found;
  j["evidence_note"] = r.evidence_note;
  j["result"] = nmf_json(r.best);
  return j;
}

nlohmann::ordered_json cloning_json(const CloningReport& r,
                                    bool include_timing) {
  ordered_json j;
  j["schema"] = kSchema;
  j["type"] = "cloning_report";
  j["task"] = to_string(r.task);
  j["clone_model"] = r.clone_model;
  j["degenerate_model"] = r.degenerate_model;
  j["n_inputs"] = r.n_inputs;
  j["n_preparations"] = r.n_preparations;
  j["factored_rank"] = r.factored_rank;
  j["hypothesis_ok"] = r.hypothesis_ok;
  j["hypothesis_mode"] = r.hypothesis_exhaustive ? "exhaustive" : "sampled";
  j["bound_l"] = r.bound_l;
  j["min_preparations"] = r.min_preparations;
  j["note"] = r.note;
  j["verdict"] = verdict_json(r.verdict);
  if (include_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

std::string curve_csv(const std::vector<SuccessCurvePoint>& curve) {
  std::string out = "c_q,root_low,root_high,closed_form,abs_error\n";
  for (const auto& p : curve) {
    const double closed = optimal_success_closed_form(p.c_q);
    out += fmt(p.c_q);
    out += ',';
    out += fmt(p.roots.front());
    out += ',';
    out += fmt(p.roots.back());
    out += ',';
    out += fmt(closed);
    out += ',';
    out += fmt(std::abs(p.optimal - closed));
    out += '\n';
  }
  return out;
}

std::string scan_csv(const SdcScanResult& scan) {
  std::string out = "c,d,fourth_eigenvalue,rank3\n";
  for (const auto& p : scan.points) {
    out += fmt(p.c);
    out += ',';
    out += fmt(p.d);
    out += ',';
    out += fmt(p.fourth_eigenvalue);
    out += ',';
    out += p.rank3 ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace copectx::io
