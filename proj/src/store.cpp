#include "polydet/store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "polydet/error.hpp"

#ifndef POLYDET_VERSION
#define POLYDET_VERSION "0.0.0"
#endif

namespace polydet {

namespace {

constexpr std::size_t kColumns = 12;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view field, const char* what) {
  T v{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty())
    throw StoreError(std::string("bad ") + what + " field '" + std::string(field) + "'");
  return v;
}

bool is_hex16(std::string_view s) {
  return s.size() == 16 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string tool_version() { return POLYDET_VERSION; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string domain_hash(const LatticeRegion& base) {
  std::ostringstream os;
  os << "format=" << kFileFormat;
  for (const auto& loop : base.base_loops()) {
    const auto first = std::min_element(loop.begin(), loop.end());
    os << '|';
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const auto& p = loop[(static_cast<std::size_t>(first - loop.begin()) + k) % loop.size()];
      os << p.x << ' ' << p.y << ';';
    }
  }
  return fnv1a_hex(os.str());
}

std::string sigma_hash(std::string_view sigma_descriptor) { return fnv1a_hex(sigma_descriptor); }

std::string csv_header() {
  return "format,tool_version,domain_hash,sigma_hash,sigma,L,n,edges,ext_boundary,class_counts,"
         "logdet,runtime_ms";
}

std::string csv_row(const SweepRecord& r, std::string_view dhash, std::string_view shash) {
  std::ostringstream os;
  os << kFileFormat << ',' << tool_version() << ',' << dhash << ',' << shash << ',' << r.sigma << ','
     << r.L << ',' << r.n_sites << ',' << r.n_edges << ',' << r.ext_boundary << ',';
  bool first = true;
  for (const auto& [k, c] : r.class_counts) {
    os << (first ? "" : "|") << k << ':' << c;
    first = false;
  }
  char rt[32];
  std::snprintf(rt, sizeof rt, "%.3f", r.runtime_ms);
  os << ',' << format_double(r.logdet) << ',' << rt;
  return os.str();
}

StoredRecord parse_csv_row(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() != kColumns)
    throw StoreError("expected " + std::to_string(kColumns) + " fields, got " + std::to_string(f.size()));
  StoredRecord s;
  if (parse_number<int>(f[0], "format") != kFileFormat) throw StoreError("unsupported format");
  if (f[1].empty()) throw StoreError("missing tool version");
  s.tool_version = std::string(f[1]);
  if (!is_hex16(f[2]) || !is_hex16(f[3])) throw StoreError("malformed hash");
  s.domain_hash = std::string(f[2]);
  s.sigma_hash = std::string(f[3]);
  if (sigma_hash(f[4]) != s.sigma_hash) throw StoreError("sigma does not match its hash");
  auto& r = s.record;
  r.sigma = std::string(f[4]);
  r.L = parse_number<std::int64_t>(f[5], "L");
  r.n_sites = parse_number<std::int64_t>(f[6], "n");
  r.n_edges = parse_number<std::int64_t>(f[7], "edges");
  r.ext_boundary = parse_number<std::int64_t>(f[8], "ext_boundary");
  if (r.L < 1 || r.n_sites < 1 || r.n_edges < 0 || r.ext_boundary < 0) throw StoreError("negative count");
  std::int64_t total = 0;
  if (!f[9].empty()) {
    for (auto item : split(f[9], '|')) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos || !is_hex16(item.substr(0, colon)))
        throw StoreError("malformed class count '" + std::string(item) + "'");
      const auto c = parse_number<std::int64_t>(item.substr(colon + 1), "class count");
      r.class_counts[std::string(item.substr(0, colon))] = c;
      total += c;
    }
  }
  if (total != r.ext_boundary) throw StoreError("class counts do not partition the boundary");
  r.logdet = parse_number<double>(f[10], "logdet");
  if (!std::isfinite(r.logdet)) throw StoreError("non-finite logdet");
  r.runtime_ms = parse_number<double>(f[11], "runtime_ms");
  return s;
}

ResultStore::ResultStore(std::filesystem::path path) : path_(std::move(path)) {}

void ResultStore::load(bool force) {
  entries_.clear();
  warnings_.clear();
  if (!std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  if (!in) throw StoreError("cannot read " + path_.string());
  std::vector<std::string> kept, bad;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("format,", 0) == 0) {
      kept.push_back(line);
      continue;
    }
    try {
      entries_.push_back(parse_csv_row(line));
      kept.push_back(line);
    } catch (const StoreError& e) {
      bad.push_back(line);
      warnings_.push_back(path_.string() + ":" + std::to_string(lineno) + ": quarantined (" + e.what() + ")");
    }
  }
  in.close();
  if (!bad.empty()) {
    std::ofstream q(path_.string() + ".quarantine", std::ios::app);
    for (const auto& b : bad) q << b << '\n';
    const auto tmp = path_.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      for (const auto& k : kept) out << k << '\n';
    }
    std::filesystem::rename(tmp, path_);
  }
  if (!force) {
    for (const auto& e : entries_) {
      if (e.tool_version != tool_version()) {
        throw StoreError(path_.string() + " holds records from version " + e.tool_version +
                         " (this is " + tool_version() + "); use --force to merge");
      }
    }
  }
}

std::vector<SweepRecord> ResultStore::records(std::string_view dhash, std::string_view shash) const {
  std::map<std::int64_t, SweepRecord> latest;
  for (const auto& e : entries_)
    if (e.domain_hash == dhash && e.sigma_hash == shash) latest[e.record.L] = e.record;
  std::vector<SweepRecord> out;
  for (auto& [L, r] : latest) out.push_back(std::move(r));
  return out;
}

void ResultStore::append(std::string_view dhash, std::string_view shash, const SweepRecord& r) {
  std::lock_guard lock(write_mutex_);
  const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw StoreError("cannot write " + path_.string());
  if (fresh) out << csv_header() << '\n';
  out << csv_row(r, dhash, shash) << '\n';
  if (!out) throw StoreError("write failed for " + path_.string());
  entries_.push_back({tool_version(), std::string(dhash), std::string(shash), r});
}

ResumeResult resume_sweep(ResultStore& store, const LatticeRegion& base,
                          std::span<const Puncture> base_punctures, CutDirection dir,
                          std::span<const std::int64_t> scales, bool force) {
  const auto dhash = domain_hash(base);
  const auto descriptor = sigma_descriptor(base_punctures, dir);
  const auto shash = sigma_hash(descriptor);
  std::map<std::int64_t, SweepRecord> have;
  if (!force)
    for (auto& r : store.records(dhash, shash)) have[r.L] = std::move(r);

  std::vector<std::int64_t> wanted(scales.begin(), scales.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  ResumeResult res;
  for (auto L : wanted)
    if (!have.contains(L)) res.computed.push_back(L);
  if (!res.computed.empty()) {
    const auto fresh = sweep(base, base_punctures, res.computed, dir);
    for (const auto& r : fresh) {
      store.append(dhash, shash, r);
      have[r.L] = r;
    }
  }
  for (auto L : wanted) res.records.push_back(have.at(L));
  return res;
}

}  // namespace polydet
