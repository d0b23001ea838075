#include "optpursuit/bench/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace optpursuit::bench {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

Stat stat_of(const std::vector<double>& v) {
  Stat s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

void point_cells(std::vector<std::string>& out, const GridPoint& g) {
  out.push_back(std::to_string(g.n));
  out.push_back(std::to_string(g.p));
  out.push_back(std::to_string(g.K));
  out.push_back(format_double(g.sampling_rate));
  out.push_back(format_double(g.snr_db));
  out.push_back(format_double(g.rho));
  out.push_back(std::string(probgen::to_string(g.signal)));
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  return line + "\r\n";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {
      "schema_version", "grid_index", "n", "p", "K", "sampling_rate", "snr_db", "rho", "signal",
      "solver", "trial", "trial_seed", "success", "nmse", "r2", "rss", "pred_error", "rel_error",
      "agreement", "iterations", "wall_time_ns", "error"};
  return cols;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = join(result_columns());
  for (const ResultRow& r : rows) {
    std::vector<std::string> c;
    c.push_back(std::to_string(kSchemaVersion));
    c.push_back(std::to_string(r.grid_index));
    point_cells(c, r.point);
    c.push_back(r.solver);
    c.push_back(std::to_string(r.trial));
    c.push_back(std::to_string(r.trial_seed));
    c.push_back(r.success ? (*r.success ? "1" : "0") : "");
    c.push_back(opt(r.nmse));
    c.push_back(opt(r.r2));
    c.push_back(opt(r.rss));
    c.push_back(opt(r.pred_error));
    c.push_back(opt(r.rel_error));
    c.push_back(opt(r.agreement));
    c.push_back(std::to_string(r.iterations));
    c.push_back(std::to_string(r.wall_time_ns));
    c.push_back(r.error);
    out += join(c);
  }
  return out;
}

std::vector<ResultRow> results_from_csv(const std::string& text) {
  const auto table = parse_csv(text);
  if (table.empty() || table.front() != result_columns())
    throw std::runtime_error("results.csv header does not match schema version " + std::to_string(kSchemaVersion));
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& c = table[i];
    if (c.size() != result_columns().size()) throw std::runtime_error("results.csv row " + std::to_string(i) + " is short");
    ResultRow r;
    r.grid_index = std::stoull(c[1]);
    r.point.n = std::stoull(c[2]);
    r.point.p = std::stoull(c[3]);
    r.point.K = std::stoull(c[4]);
    r.point.sampling_rate = std::stod(c[5]);
    r.point.snr_db = std::stod(c[6]);
    r.point.rho = std::stod(c[7]);
    r.point.signal = probgen::parse_signal_kind(c[8]);
    r.solver = c[9];
    r.trial = std::stoull(c[10]);
    r.trial_seed = std::stoull(c[11]);
    if (!c[12].empty()) r.success = c[12] == "1";
    r.nmse = parse_opt(c[13]);
    r.r2 = parse_opt(c[14]);
    r.rss = parse_opt(c[15]);
    r.pred_error = parse_opt(c[16]);
    r.rel_error = parse_opt(c[17]);
    r.agreement = parse_opt(c[18]);
    r.iterations = std::stoull(c[19]);
    r.wall_time_ns = std::stoll(c[20]);
    r.error = c[21];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::pair<Index, std::string>, std::size_t> slot;
  std::vector<std::vector<const ResultRow*>> members;
  for (const ResultRow& r : rows) {
    auto [it, fresh] = slot.emplace(std::make_pair(r.grid_index, r.solver), out.size());
    if (fresh) {
      AggregateRow a;
      a.grid_index = r.grid_index;
      a.point = r.point;
      a.solver = r.solver;
      out.push_back(a);
      members.emplace_back();
    }
    members[it->second].push_back(&r);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    AggregateRow& a = out[k];
    std::vector<double> nmse, r2, rss, pe, rel, agr, iters, wall;
    for (const ResultRow* r : members[k]) {
      ++a.trials;
      if (!r->error.empty()) {
        ++a.failures;
        continue;
      }
      if (r->success.value_or(false)) ++a.successes;
      if (r->nmse) nmse.push_back(*r->nmse);
      if (r->r2) r2.push_back(*r->r2);
      if (r->rss) rss.push_back(*r->rss);
      if (r->pred_error) pe.push_back(*r->pred_error);
      if (r->rel_error) rel.push_back(*r->rel_error);
      if (r->agreement) agr.push_back(*r->agreement);
      iters.push_back(static_cast<double>(r->iterations));
      wall.push_back(static_cast<double>(r->wall_time_ns));
    }
    a.nmse = stat_of(nmse);
    a.r2 = stat_of(r2);
    a.rss = stat_of(rss);
    a.pred_error = stat_of(pe);
    a.rel_error = stat_of(rel);
    a.agreement = stat_of(agr);
    a.iterations = stat_of(iters);
    if (!wall.empty()) {
      std::sort(wall.begin(), wall.end());
      const std::size_t m = wall.size() / 2;
      a.median_wall_time_ns = wall.size() % 2 ? wall[m] : 0.5 * (wall[m - 1] + wall[m]);
    }
  }
  return out;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
  std::vector<std::string> head = {"schema_version", "grid_index", "n", "p", "K", "sampling_rate", "snr_db", "rho",
                                   "signal", "solver", "trials", "failures", "successes", "success_rate"};
  for (const char* m : {"nmse", "r2", "rss", "pred_error", "rel_error", "agreement", "iterations"}) {
    head.push_back(std::string(m) + "_mean");
    head.push_back(std::string(m) + "_std");
  }
  head.push_back("median_wall_time_ns");
  std::string out = join(head);
  for (const AggregateRow& a : rows) {
    std::vector<std::string> c;
    c.push_back(std::to_string(kSchemaVersion));
    c.push_back(std::to_string(a.grid_index));
    point_cells(c, a.point);
    c.push_back(a.solver);
    c.push_back(std::to_string(a.trials));
    c.push_back(std::to_string(a.failures));
    c.push_back(std::to_string(a.successes));
    c.push_back(format_double(static_cast<double>(a.successes) / static_cast<double>(a.trials)));
    for (const Stat* s : {&a.nmse, &a.r2, &a.rss, &a.pred_error, &a.rel_error, &a.agreement, &a.iterations}) {
      c.push_back(s->count ? format_double(s->mean) : "");
      c.push_back(s->count ? format_double(s->std) : "");
    }
    c.push_back(format_double(a.median_wall_time_ns));
    out += join(c);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace optpursuit::bench
