#include "heatex/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "heatex/errors.hpp"

namespace heatex {
namespace {

using nlohmann::json;

std::string csv_field(std::string const& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string join_flags(std::vector<std::string> const& flags) {
  std::string out;
  for (auto const& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

class CsvWriter {
 public:
  CsvWriter(std::string const& table, Report const& report) {
    os_ << "# heatex " << table << "\n";
    os_ << "# command: " << report.command << "\n";
    os_ << "# config: " << report.config.echo().dump() << "\n";
  }
  CsvWriter& header(std::vector<std::string> const& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
    os_ << "\n";
    return *this;
  }
  CsvWriter& num(double x) { return cell(format_number(x)); }
  CsvWriter& integer(long long x) { return cell(std::to_string(x)); }
  CsvWriter& text(std::string const& s) { return cell(csv_field(s)); }
  CsvWriter& blank() { return cell(""); }
  void end_row() {
    os_ << "\n";
    first_ = true;
  }
  std::string str() const { return os_.str(); }

 private:
  CsvWriter& cell(std::string const& s) {
    if (!first_) os_ << ",";
    os_ << s;
    first_ = false;
    return *this;
  }
  std::ostringstream os_;
  bool first_ = true;
};

bool classical(Report const& r) { return r.config.regime == Regime::classical; }

std::string verify_table(Report const& r) {
  CsvWriter w("verify", r);
  std::vector<std::string> cols{"z", "lhs", "rhs", "defect", "verdict"};
  if (classical(r)) {
    cols.insert(cols.end(), {"lhs_stderr", "rhs_stderr", "lhs_ess", "rhs_ess", "flags"});
  }
  cols.push_back("note");
  w.header(cols);
  for (auto const& row : r.identity) {
    w.num(row.z).num(row.lhs).num(row.rhs).num(row.defect).text(to_string(row.verdict));
    if (classical(r)) {
      w.num(row.lhs_stderr).num(row.rhs_stderr).num(row.lhs_ess).num(row.rhs_ess)
          .text(join_flags(row.flags));
    }
    w.text(row.note).end_row();
  }
  return w.str();
}

std::string checks_table(Report const& r) {
  CsvWriter w("checks", r);
  w.header({"name", "lhs", "rhs", "defect", "tolerance", "verdict", "note"});
  for (auto const& c : r.checks) {
    w.text(c.name).num(c.lhs).num(c.rhs).num(c.defect).num(c.tolerance)
        .text(to_string(c.verdict)).text(c.note).end_row();
  }
  return w.str();
}

std::string moments_table(Report const& r) {
  CsvWriter w("moments", r);
  w.header({"n", "ordered", "direct", "ordered_stderr", "direct_stderr", "defect",
            "verdict", "note"});
  for (auto const& m : r.moments) {
    w.integer(m.n).num(m.ordered).num(m.direct).num(m.ordered_stderr)
        .num(m.direct_stderr).num(m.defect).text(to_string(m.verdict)).text(m.note)
        .end_row();
  }
  return w.str();
}

std::string sweep_table(Report const& r) {
  CsvWriter w("sweep", r);
  w.header({"coupling", "defect", "defect_stderr", "via_defect", "verdict", "flags",
            "note"});
  for (auto const& s : r.sweep) {
    w.num(s.coupling).num(s.defect).num(s.defect_stderr).num(s.via_defect)
        .text(to_string(s.verdict)).text(join_flags(s.flags)).text(s.note).end_row();
  }
  return w.str();
}

std::string charfn_table(Report const& r) {
  CsvWriter w("charfn", r);
  w.header({"u", "g_re", "g_im", "fourier_re", "fourier_im", "defect"});
  for (auto const& c : r.charfn) {
    w.num(c.u).num(c.g.real()).num(c.g.imag()).num(c.fourier.real())
        .num(c.fourier.imag()).num(c.defect).end_row();
  }
  return w.str();
}

std::string distribution_table(Report const& r) {
  CsvWriter w("distribution", r);
  std::vector<std::string> cols;
  std::size_t rows = 0;
  for (auto const& d : r.distributions) {
    std::string const def = to_string(d.definition);
    cols.push_back("q_" + def);
    cols.push_back("p_" + def);
    rows = std::max(rows, d.atoms.size());
  }
  w.header(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (auto const& d : r.distributions) {
      if (i < d.atoms.size()) {
        w.num(d.atoms[i].q).num(d.atoms[i].p);
      } else {
        w.blank().blank();
      }
    }
    w.end_row();
  }
  return w.str();
}

std::string ensemble_table(Report const& r) {
  CsvWriter w("ensemble", r);
  w.header({"e_a0", "e_b0", "e_ab0", "h0", "e_a1", "e_b1", "e_ab1", "h1", "q_via_b",
            "q_via_a", "defect"});
  for (auto const& p : r.ensemble->pairs) {
    PairHeat const h = heat_of_pair(p);
    w.num(p.e_a0).num(p.e_b0).num(p.e_ab0).num(p.total0()).num(p.e_a1).num(p.e_b1)
        .num(p.e_ab1).num(p.total1()).num(h.q_via_b).num(h.q_via_a)
        .num(h.conservation_defect).end_row();
  }
  return w.str();
}

json num_json(double x) { return std::isfinite(x) ? json(x) : json(format_number(x)); }

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

json report_to_json(Report const& r, WriteOptions const& opts) {
  json doc;
  doc["command"] = r.command;
  doc["config"] = r.config.echo();
  doc["metadata"] = r.metadata;
  json summary;
  for (Verdict v : {Verdict::pass, Verdict::fail, Verdict::inconclusive,
                    Verdict::skipped}) {
    summary[to_string(v)] = r.count(v);
  }
  doc["summary"] = summary;

  json rows = json::array();
  for (auto const& row : r.identity) {
    json j{{"z", num_json(row.z)}, {"lhs", num_json(row.lhs)},
           {"rhs", num_json(row.rhs)}, {"defect", num_json(row.defect)},
           {"verdict", to_string(row.verdict)}};
    if (classical(r)) {
      j["lhs_stderr"] = num_json(row.lhs_stderr);
      j["rhs_stderr"] = num_json(row.rhs_stderr);
      j["lhs_ess"] = num_json(row.lhs_ess);
      j["rhs_ess"] = num_json(row.rhs_ess);
      j["flags"] = row.flags;
    }
    if (!row.note.empty()) j["note"] = row.note;
    rows.push_back(j);
  }
  doc["identity"] = rows;

  json checks = json::array();
  for (auto const& c : r.checks) {
    checks.push_back({{"name", c.name}, {"lhs", num_json(c.lhs)},
                      {"rhs", num_json(c.rhs)}, {"defect", num_json(c.defect)},
                      {"tolerance", num_json(c.tolerance)},
                      {"verdict", to_string(c.verdict)}, {"note", c.note}});
  }
  doc["checks"] = checks;

  json moments = json::array();
  for (auto const& m : r.moments) {
    moments.push_back({{"n", m.n}, {"ordered", num_json(m.ordered)},
                       {"direct", num_json(m.direct)},
                       {"ordered_stderr", num_json(m.ordered_stderr)},
                       {"direct_stderr", num_json(m.direct_stderr)},
                       {"defect", num_json(m.defect)},
                       {"verdict", to_string(m.verdict)}, {"note", m.note}});
  }
  doc["moments"] = moments;

  json sweep = json::array();
  for (auto const& s : r.sweep) {
    sweep.push_back({{"coupling", num_json(s.coupling)},
                     {"defect", num_json(s.defect)},
                     {"defect_stderr", num_json(s.defect_stderr)},
                     {"via_defect", num_json(s.via_defect)},
                     {"verdict", to_string(s.verdict)}, {"flags", s.flags},
                     {"note", s.note}});
  }
  doc["sweep"] = sweep;

  if (!r.charfn.empty()) {
    double worst = 0.0;
    for (auto const& c : r.charfn) worst = std::max(worst, c.defect);
    doc["charfn"] = {{"points", r.charfn.size()}, {"max_defect", num_json(worst)},
                     {"table", "charfn.csv"}};
  }
  json dists = json::array();
  for (auto const& d : r.distributions) {
    json atoms = json::array();
    for (auto const& a : d.atoms) atoms.push_back({num_json(a.q), num_json(a.p)});
    dists.push_back({{"definition", to_string(d.definition)},
                     {"binning_tolerance", d.binning_tolerance},
                     {"total_probability", d.total_probability()},
                     {"atoms", atoms}});
  }
  doc["distributions"] = dists;
  if (r.ensemble) {
    doc["ensemble"] = {{"pairs", r.ensemble->pairs.size()},
                       {"seed", r.ensemble->seed},
                       {"tau", r.ensemble->tau},
                       {"propagator", to_string(r.ensemble->method)},
                       {"table", "ensemble.csv"}};
  }
  if (!opts.compare_mode) {
    json t;
    for (auto const& [name, secs] : r.timings) t[name] = secs;
    doc["metadata"]["timings"] = t;
  }
  return doc;
}

std::vector<Table> report_tables(Report const& r) {
  std::vector<Table> out;
  if (!r.identity.empty()) out.push_back({"verify.csv", verify_table(r)});
  if (!r.checks.empty()) out.push_back({"checks.csv", checks_table(r)});
  if (!r.moments.empty()) out.push_back({"moments.csv", moments_table(r)});
  if (!r.sweep.empty()) out.push_back({"sweep.csv", sweep_table(r)});
  if (!r.charfn.empty()) out.push_back({"charfn.csv", charfn_table(r)});
  if (!r.distributions.empty()) {
    out.push_back({"distribution.csv", distribution_table(r)});
  }
  if (r.ensemble) out.push_back({"ensemble.csv", ensemble_table(r)});
  return out;
}

std::vector<std::filesystem::path> write_report(Report const& r,
                                                std::filesystem::path const& dir,
                                                WriteOptions const& opts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                ec.message());
  }
  std::vector<std::filesystem::path> written;
  auto put = [&](std::string const& name, std::string const& text) {
    std::filesystem::path const path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    written.push_back(path);
  };
  put("report.json", report_to_json(r, opts).dump(2) + "\n");
  for (auto const& t : report_tables(r)) put(t.file, t.text);
  return written;
}

}  // namespace heatex
