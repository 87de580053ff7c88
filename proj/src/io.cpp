#include "gqfi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gqfi {

namespace {

using ordered_json = nlohmann::ordered_json;

// Round-trips through the 12-significant-digit text form so that JSON numbers
// carry the same precision as the CSV columns.
double rounded(double v) { return std::stod(format_double(v)); }

ordered_json metadata_json(const Metadata& meta) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : meta.entries) j[k] = v;
  return j;
}

void write_metadata_csv(std::ostringstream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta.entries) out << "# " << k << ": " << v << "\n";
}

ProbeParams cell_params(const SweepSpec& spec, const SweepCell& cell) {
  ProbeParams p = with_parameter(spec.fixed, spec.vary_x.id, cell.x);
  if (spec.vary_y) p = with_parameter(p, spec.vary_y->id, cell.y);
  return p;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Metadata base_metadata(const std::string& command) {
  Metadata meta;
  meta.add("tool", std::string("gqfi ") + kVersion);
  meta.add("command", command);
  meta.add("convention", kConvention);
  return meta;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw UnknownParameterError("unknown format '" + name + "' (expected csv or json)");
}

std::string serialize_sweep(const SweepTable& table, const Metadata& meta, OutputFormat fmt) {
  const bool reduced = table.spec.emit_reduced_thermometry;
  const bool spectrum = table.spec.emit_spectrum;

  if (fmt == OutputFormat::Csv) {
    std::ostringstream out;
    write_metadata_csv(out, meta);
    out << "phi,r,nbar,mbar,qfi,engine,flags";
    if (reduced) out << ",qfi_reduced,tau";
    if (spectrum) out << ",lambda1,lambda2,lambda3,lambda4";
    out << "\n";
    for (const auto& cell : table.cells) {
      const ProbeParams p = cell_params(table.spec, cell);
      out << format_double(p.phi) << "," << format_double(p.r) << ","
          << format_double(p.nbar) << "," << format_double(p.mbar) << ","
          << format_double(cell.value) << ","
          << (cell.failed ? "error" : engine_name(cell.engine_used)) << ","
          << cell.flags.to_string();
      if (reduced) {
        const double tau = std::cos(p.phi) * std::cos(p.phi);
        out << "," << format_double(cell.reduced_value) << "," << format_double(tau);
      }
      if (spectrum) {
        for (double l : cell.lambda) out << "," << format_double(l);
      }
      out << "\n";
    }
    return out.str();
  }

  ordered_json j;
  j["metadata"] = metadata_json(meta);
  j["rows"] = ordered_json::array();
  for (const auto& cell : table.cells) {
    const ProbeParams p = cell_params(table.spec, cell);
    ordered_json row;
    row["phi"] = rounded(p.phi);
    row["r"] = rounded(p.r);
    row["nbar"] = rounded(p.nbar);
    row["mbar"] = rounded(p.mbar);
    row["qfi"] = rounded(cell.value);
    row["engine"] = cell.failed ? "error" : engine_name(cell.engine_used);
    row["flags"] = cell.flags.to_string();
    if (reduced) {
      row["qfi_reduced"] = rounded(cell.reduced_value);
      row["tau"] = rounded(std::cos(p.phi) * std::cos(p.phi));
    }
    if (spectrum) {
      row["lambda"] = {rounded(cell.lambda[0]), rounded(cell.lambda[1]),
                       rounded(cell.lambda[2]), rounded(cell.lambda[3])};
    }
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string serialize_spectrum(const std::vector<std::pair<ProbeParams, SpectrumTable>>& blocks,
                               const Metadata& meta, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream out;
    write_metadata_csv(out, meta);
    for (const auto& [fixed, table] : blocks) {
      for (double c : table.crossings) {
        out << "# crossing at " << parameter_name(table.axis.id) << " = " << format_double(c)
            << "\n";
      }
    }
    out << "phi,r,nbar,mbar,lambda1,lambda2,lambda3,lambda4,branch_gap\n";
    for (const auto& [fixed, table] : blocks) {
      for (const auto& row : table.rows) {
        const ProbeParams p = with_parameter(fixed, table.axis.id, row.x);
        out << format_double(p.phi) << "," << format_double(p.r) << ","
            << format_double(p.nbar) << "," << format_double(p.mbar);
        for (double l : row.lambda) out << "," << format_double(l);
        out << "," << format_double(row.branch_gap) << "\n";
      }
    }
    return out.str();
  }

  ordered_json j;
  j["metadata"] = metadata_json(meta);
  j["blocks"] = ordered_json::array();
  for (const auto& [fixed, table] : blocks) {
    ordered_json block;
    block["fixed"] = {{"phi", rounded(fixed.phi)},
                      {"r", rounded(fixed.r)},
                      {"nbar", rounded(fixed.nbar)},
                      {"mbar", rounded(fixed.mbar)}};
    block["axis"] = parameter_name(table.axis.id);
    block["crossings"] = ordered_json::array();
    for (double c : table.crossings) block["crossings"].push_back(rounded(c));
    block["rows"] = ordered_json::array();
    for (const auto& row : table.rows) {
      block["rows"].push_back({{"x", rounded(row.x)},
                               {"lambda",
                                {rounded(row.lambda[0]), rounded(row.lambda[1]),
                                 rounded(row.lambda[2]), rounded(row.lambda[3])}},
                               {"branch_gap", rounded(row.branch_gap)}});
    }
    j["blocks"].push_back(std::move(block));
  }
  return j.dump(2) + "\n";
}

std::string serialize_crb(const CrbReport& report, const Metadata& meta, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv) {
    std::ostringstream out;
    write_metadata_csv(out, meta);
    out << "parameter,theta_star,shots,trials,empirical_variance,crb,classical_fi,"
           "classical_bound,qfi,bias,seed\n";
    out << parameter_name(report.which) << "," << format_double(report.theta_star) << ","
        << report.shots << "," << report.trials << ","
        << format_double(report.empirical_variance) << "," << format_double(report.crb) << ","
        << format_double(report.classical_fi) << "," << format_double(report.classical_bound)
        << "," << format_double(report.qfi) << "," << format_double(report.bias) << ","
        << report.seed << "\n";
    return out.str();
  }
  ordered_json j;
  j["metadata"] = metadata_json(meta);
  j["parameter"] = parameter_name(report.which);
  j["theta_star"] = rounded(report.theta_star);
  j["shots"] = report.shots;
  j["trials"] = report.trials;
  j["empirical_variance"] = rounded(report.empirical_variance);
  j["crb"] = rounded(report.crb);
  j["classical_fi"] = rounded(report.classical_fi);
  j["classical_bound"] = rounded(report.classical_bound);
  j["qfi"] = rounded(report.qfi);
  j["bias"] = rounded(report.bias);
  j["seed"] = report.seed;
  return j.dump(2) + "\n";
}

void write_output(const std::string& path, std::ostream& fallback, const std::string& payload) {
  if (path.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << payload;
}

}  // namespace gqfi
