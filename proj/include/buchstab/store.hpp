#pragma once

// Versioned on-disk artifacts and deterministic CSV/JSON tables.
//
// An artifact file is one line of JSON header followed by a text payload:
//
//   {"checksum":"<fnv1a-64 hex of payload>","format_version":1,"kind":"...","params":{...}}
//   <payload>
//
// Exact integers are written as decimal strings; Real coefficients as the
// shortest decimal string that reads back bit-identically. Serialization is
// a pure function of the artifact contents, so load-then-save reproduces
// the file byte for byte.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "buchstab/enumeration.hpp"
#include "buchstab/omega.hpp"
#include "buchstab/omega_k.hpp"

namespace buchstab {

inline constexpr int kArtifactFormatVersion = 1;

enum class ArtifactKind { CountTable, OmegaLedger, OmegaKLedger };

std::string to_string(ArtifactKind kind);

struct ArtifactHeader {
  int format_version = kArtifactFormatVersion;
  ArtifactKind kind = ArtifactKind::CountTable;
  std::map<std::string, std::string> params;
};

struct StoredArtifact {
  ArtifactHeader header;
  std::variant<CountTable, OmegaLedger, OmegaKLedger> payload;
};

StoredArtifact make_artifact(CountTable table);
StoredArtifact make_artifact(OmegaLedger ledger);
StoredArtifact make_artifact(OmegaKLedger ledger);

std::string serialize(const StoredArtifact& artifact);
// PersistenceError on unsupported version, checksum mismatch or malformed payload.
StoredArtifact deserialize(std::string_view text);

// PersistenceError on I/O failure as well.
void save_artifact(const StoredArtifact& artifact, const std::filesystem::path& path);
StoredArtifact load_artifact(const std::filesystem::path& path);

// Reads only the header line.
ArtifactHeader read_header(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

// Artifacts keyed by their header params inside one directory. Every access
// holds an advisory lock on <dir>/.lock.
class ArtifactCache {
 public:
  explicit ArtifactCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const ArtifactHeader& header) const;

  CountTable count_table(const ComponentClass& cls, unsigned max_size, std::uint64_t memory_cap);
  OmegaLedger omega_ledger(const QuadratureConfig& config);
  OmegaKLedger omega_k_ledger(const std::string& k_text, unsigned max_interval, unsigned degree,
                              int digits);

  struct Entry {
    std::filesystem::path path;
    ArtifactHeader header;
  };
  std::vector<Entry> list() const;
  std::size_t clear();

 private:
  std::filesystem::path dir_;
};

struct OutputTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // rows may be shorter than columns

  std::string to_csv() const;
  std::string to_json() const;
  std::string render(std::string_view format) const;  // "csv" or "json"
};

}  // namespace buchstab
