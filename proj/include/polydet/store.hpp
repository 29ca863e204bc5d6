#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polydet/connection.hpp"
#include "polydet/fit.hpp"
#include "polydet/geometry.hpp"

namespace polydet {

inline constexpr int kFileFormat = 1;

std::string tool_version();

/// 64-bit FNV-1a of `bytes`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Digest of the canonical serialization of the base loops (orientation
/// normalized, each loop rotated to start at its smallest vertex).
std::string domain_hash(const LatticeRegion& base);
std::string sigma_hash(std::string_view sigma_descriptor);

/// CSV header and row codec for sweep records.
std::string csv_header();
std::string csv_row(const SweepRecord& r, std::string_view domain_hash, std::string_view sigma_hash);

struct StoredRecord {
  std::string tool_version;
  std::string domain_hash;
  std::string sigma_hash;
  SweepRecord record;
};

/// Parses one data line; throws StoreError on any malformed field.
StoredRecord parse_csv_row(std::string_view line);

/// Append-only CSV of sweep records keyed by (domain hash, sigma hash, L).
///
/// Lines that fail to parse are moved to `<path>.quarantine` and reported
/// in warnings(). Records written by another tool version make load() throw
/// unless `force` is set.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path path);

  void load(bool force = false);
  const std::filesystem::path& path() const noexcept { return path_; }
  std::span<const StoredRecord> entries() const noexcept { return entries_; }
  std::span<const std::string> warnings() const noexcept { return warnings_; }

  std::vector<SweepRecord> records(std::string_view domain_hash, std::string_view sigma_hash) const;
  void append(std::string_view domain_hash, std::string_view sigma_hash, const SweepRecord& r);

 private:
  std::filesystem::path path_;
  std::vector<StoredRecord> entries_;
  std::vector<std::string> warnings_;
  std::mutex write_mutex_;
};

struct ResumeResult {
  std::vector<SweepRecord> records;  // requested L values, ascending
  std::vector<std::int64_t> computed;
};

/// Computes only the L values missing from the store (all of them with
/// `force`), appends them, and returns the merged records.
ResumeResult resume_sweep(ResultStore& store, const LatticeRegion& base,
                          std::span<const Puncture> base_punctures, CutDirection dir,
                          std::span<const std::int64_t> scales, bool force = false);

}  // namespace polydet
