#include "buchstab/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace buchstab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::CountTable:
      return "count-table";
    case ArtifactKind::OmegaLedger:
      return "omega-ledger";
    case ArtifactKind::OmegaKLedger:
      return "omega-k-ledger";
  }
  return "unknown";
}

namespace {

ArtifactKind kind_from_string(const std::string& name) {
  if (name == "count-table") return ArtifactKind::CountTable;
  if (name == "omega-ledger") return ArtifactKind::OmegaLedger;
  if (name == "omega-k-ledger") return ArtifactKind::OmegaKLedger;
  throw PersistenceError("unknown artifact kind '" + name + "'");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

unsigned long parse_count(const std::map<std::string, std::string>& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end()) throw PersistenceError(std::string("missing header param ") + key);
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw PersistenceError(std::string("bad header param ") + key + "='" + it->second + "'");
  }
}

std::string blocks_payload(const std::vector<TaylorBlock>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    out += std::to_string(b.n);
    for (const auto& c : b.coeffs) {
      out += ' ';
      out += c.to_exact_string();
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string w;
  while (in >> w) words.push_back(std::move(w));
  return words;
}

std::vector<std::string> split_lines(std::string_view payload) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < payload.size()) {
    const std::size_t end = payload.find('\n', start);
    if (end == std::string_view::npos) {
      throw PersistenceError("payload does not end with a newline");
    }
    lines.emplace_back(payload.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<TaylorBlock> parse_blocks(std::string_view payload, unsigned count, unsigned degree,
                                      int digits) {
  const auto lines = split_lines(payload);
  if (lines.size() != count) {
    throw PersistenceError("expected " + std::to_string(count) + " blocks, found " +
                           std::to_string(lines.size()));
  }
  std::vector<TaylorBlock> blocks;
  blocks.reserve(count);
  for (const auto& line : lines) {
    const auto words = split_words(line);
    if (words.size() != degree + 2) throw PersistenceError("malformed block line");
    TaylorBlock b;
    try {
      b.n = static_cast<unsigned>(std::stoul(words[0]));
      b.coeffs.reserve(degree + 1);
      for (std::size_t i = 1; i < words.size(); ++i) {
        b.coeffs.push_back(Real::parse(words[i], digits));
      }
    } catch (const std::exception& e) {
      throw PersistenceError(std::string("malformed coefficient: ") + e.what());
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

ComponentClass class_by_name(const std::string& name, const std::vector<std::vector<Natural>>& rows) {
  if (name == "permutations") return ComponentClass::permutations();
  if (name == "derangements") return ComponentClass::derangements();
  // Other classes are recovered from the diagonal s_{n,n} = c_n.
  std::vector<Natural> diagonal;
  for (const auto& row : rows) diagonal.push_back(row.back());
  return ComponentClass(name, [diagonal](unsigned k) {
    if (k < 1 || k > diagonal.size()) throw RangeError("stored class weight out of range");
    return diagonal[k - 1];
  });
}

std::string payload_of(const StoredArtifact& artifact) {
  return std::visit(
      [](const auto& value) -> std::string {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, CountTable>) {
          std::string out;
          for (unsigned n = 1; n <= value.max_size(); ++n) {
            for (unsigned k = 1; k <= n; ++k) {
              if (k > 1) out += ' ';
              out += value.count(n, k).get_str();
            }
            out += '\n';
          }
          return out;
        } else {
          return blocks_payload(value.blocks());
        }
      },
      artifact.payload);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

StoredArtifact make_artifact(CountTable table) {
  ArtifactHeader header;
  header.kind = ArtifactKind::CountTable;
  header.params = {{"N", std::to_string(table.max_size())},
                   {"class", table.component_class().name()}};
  return StoredArtifact{std::move(header), std::move(table)};
}

StoredArtifact make_artifact(OmegaLedger ledger) {
  ArtifactHeader header;
  header.kind = ArtifactKind::OmegaLedger;
  const auto& cfg = ledger.config();
  header.params = {{"J", std::to_string(cfg.taylor_degree)},
                   {"n*", std::to_string(cfg.max_interval)},
                   {"p", std::to_string(cfg.precision)}};
  return StoredArtifact{std::move(header), std::move(ledger)};
}

StoredArtifact make_artifact(OmegaKLedger ledger) {
  ArtifactHeader header;
  header.kind = ArtifactKind::OmegaKLedger;
  header.params = {{"J", std::to_string(ledger.degree())},
                   {"K", ledger.k_text()},
                   {"n*", std::to_string(ledger.max_interval())},
                   {"p", std::to_string(ledger.digits())}};
  return StoredArtifact{std::move(header), std::move(ledger)};
}

std::string serialize(const StoredArtifact& artifact) {
  const std::string payload = payload_of(artifact);
  json header = {
      {"format_version", artifact.header.format_version},
      {"kind", to_string(artifact.header.kind)},
      {"params", artifact.header.params},
      {"checksum", hex64(fnv1a64(payload))},
  };
  return header.dump() + "\n" + payload;
}

namespace {

ArtifactHeader parse_header(const std::string& line, std::string* checksum) {
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw PersistenceError(std::string("unreadable artifact header: ") + e.what());
  }
  ArtifactHeader out;
  try {
    out.format_version = header.at("format_version").get<int>();
    if (out.format_version != kArtifactFormatVersion) {
      throw PersistenceError("unsupported artifact format_version " +
                             std::to_string(out.format_version) + " (this build reads " +
                             std::to_string(kArtifactFormatVersion) + ")");
    }
    out.kind = kind_from_string(header.at("kind").get<std::string>());
    out.params = header.at("params").get<std::map<std::string, std::string>>();
    if (checksum) *checksum = header.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    throw PersistenceError(std::string("malformed artifact header: ") + e.what());
  }
  return out;
}

}  // namespace

StoredArtifact deserialize(std::string_view text) {
  const std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos) throw PersistenceError("artifact has no header line");
  std::string checksum;
  ArtifactHeader header = parse_header(std::string(text.substr(0, eol)), &checksum);
  const std::string_view payload = text.substr(eol + 1);
  if (hex64(fnv1a64(payload)) != checksum) {
    throw PersistenceError("artifact payload checksum mismatch (corrupt file)");
  }

  switch (header.kind) {
    case ArtifactKind::CountTable: {
      const auto size = parse_count(header.params, "N");
      const auto lines = split_lines(payload);
      if (lines.size() != size) throw PersistenceError("count table row count mismatch");
      std::vector<std::vector<Natural>> rows;
      rows.reserve(size);
      for (const auto& line : lines) {
        std::vector<Natural> row;
        for (const auto& w : split_words(line)) {
          Natural v;
          if (v.set_str(w, 10) != 0 || v < 0) throw PersistenceError("malformed count '" + w + "'");
          row.push_back(std::move(v));
        }
        rows.push_back(std::move(row));
      }
      const auto cls_it = header.params.find("class");
      if (cls_it == header.params.end()) throw PersistenceError("missing header param class");
      try {
        ComponentClass cls = class_by_name(cls_it->second, rows);
        CountTable table = CountTable::from_rows(std::move(cls), std::move(rows));
        return StoredArtifact{std::move(header), std::move(table)};
      } catch (const std::invalid_argument& e) {
        throw PersistenceError(std::string("malformed count table: ") + e.what());
      }
    }
    case ArtifactKind::OmegaLedger: {
      QuadratureConfig cfg;
      cfg.taylor_degree = static_cast<unsigned>(parse_count(header.params, "J"));
      cfg.max_interval = static_cast<unsigned>(parse_count(header.params, "n*"));
      cfg.precision = static_cast<int>(parse_count(header.params, "p"));
      auto blocks = parse_blocks(payload, cfg.max_interval, cfg.taylor_degree, cfg.precision);
      try {
        OmegaLedger ledger = OmegaLedger::from_blocks(cfg, std::move(blocks));
        return StoredArtifact{std::move(header), std::move(ledger)};
      } catch (const std::invalid_argument& e) {
        throw PersistenceError(std::string("malformed omega ledger: ") + e.what());
      }
    }
    case ArtifactKind::OmegaKLedger: {
      const auto degree = static_cast<unsigned>(parse_count(header.params, "J"));
      const auto count = static_cast<unsigned>(parse_count(header.params, "n*"));
      const auto digits = static_cast<int>(parse_count(header.params, "p"));
      const auto k_it = header.params.find("K");
      if (k_it == header.params.end()) throw PersistenceError("missing header param K");
      auto blocks = parse_blocks(payload, count, degree, digits);
      try {
        OmegaKLedger ledger = OmegaKLedger::from_blocks(k_it->second, degree, digits, std::move(blocks));
        return StoredArtifact{std::move(header), std::move(ledger)};
      } catch (const std::exception& e) {
        throw PersistenceError(std::string("malformed omega-k ledger: ") + e.what());
      }
    }
  }
  throw PersistenceError("unreachable artifact kind");
}

void save_artifact(const StoredArtifact& artifact, const fs::path& path) {
  const std::string bytes = serialize(artifact);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PersistenceError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PersistenceError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw PersistenceError("cannot move artifact into place: " + ec.message());
}

StoredArtifact load_artifact(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

ArtifactHeader read_header(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  return parse_header(line, nullptr);
}

namespace {

class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) {
    const fs::path lock = dir / ".lock";
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
      if (fd_ >= 0) ::close(fd_);
      throw PersistenceError("cannot lock cache directory " + dir.string());
    }
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;
  ~DirectoryLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

constexpr const char* kArtifactExtension = ".bsa";

template <typename T, typename Build>
T cached(const fs::path& dir, const fs::path& path, const ArtifactHeader& expected, Build build) {
  DirectoryLock lock(dir);
  if (fs::exists(path)) {
    StoredArtifact stored = load_artifact(path);
    if (stored.header.kind == expected.kind && stored.header.params == expected.params) {
      return std::get<T>(std::move(stored.payload));
    }
  }
  StoredArtifact fresh = make_artifact(build());
  save_artifact(fresh, path);
  return std::get<T>(std::move(fresh.payload));
}

}  // namespace

ArtifactCache::ArtifactCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw PersistenceError("cannot create cache directory " + dir_.string());
}

fs::path ArtifactCache::path_for(const ArtifactHeader& header) const {
  std::string name = to_string(header.kind);
  for (const auto& [key, value] : header.params) {
    name += '_';
    for (char c : key) name += (c == '*') ? 's' : c;
    name += '-';
    for (char c : value) name += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return dir_ / (name + kArtifactExtension);
}

CountTable ArtifactCache::count_table(const ComponentClass& cls, unsigned max_size,
                                      std::uint64_t memory_cap) {
  ArtifactHeader header;
  header.kind = ArtifactKind::CountTable;
  header.params = {{"N", std::to_string(max_size)}, {"class", cls.name()}};
  return cached<CountTable>(dir_, path_for(header), header,
                            [&] { return build_table(cls, max_size, memory_cap); });
}

OmegaLedger ArtifactCache::omega_ledger(const QuadratureConfig& config) {
  ArtifactHeader header;
  header.kind = ArtifactKind::OmegaLedger;
  header.params = {{"J", std::to_string(config.taylor_degree)},
                   {"n*", std::to_string(config.max_interval)},
                   {"p", std::to_string(config.precision)}};
  OmegaLedger ledger =
      cached<OmegaLedger>(dir_, path_for(header), header, [&] { return OmegaLedger::build(config); });
  // The grid is not part of the stored ledger; reattach the requested one.
  std::vector<OmegaBlock> blocks = ledger.blocks();
  return OmegaLedger::from_blocks(config, std::move(blocks));
}

OmegaKLedger ArtifactCache::omega_k_ledger(const std::string& k_text, unsigned max_interval,
                                           unsigned degree, int digits) {
  ArtifactHeader header;
  header.kind = ArtifactKind::OmegaKLedger;
  header.params = {{"J", std::to_string(degree)},
                   {"K", k_text},
                   {"n*", std::to_string(max_interval)},
                   {"p", std::to_string(digits)}};
  return cached<OmegaKLedger>(dir_, path_for(header), header, [&] {
    return OmegaKLedger::build(k_text, max_interval, degree, digits);
  });
}

std::vector<ArtifactCache::Entry> ArtifactCache::list() const {
  DirectoryLock lock(dir_);
  std::vector<Entry> entries;
  for (const auto& item : fs::directory_iterator(dir_)) {
    if (item.path().extension() != kArtifactExtension) continue;
    try {
      entries.push_back({item.path(), read_header(item.path())});
    } catch (const PersistenceError&) {
      // unreadable entries are skipped; `cache clear` removes them
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.path < b.path; });
  return entries;
}

std::size_t ArtifactCache::clear() {
  DirectoryLock lock(dir_);
  std::size_t removed = 0;
  for (const auto& item : fs::directory_iterator(dir_)) {
    const auto ext = item.path().extension();
    if (ext == kArtifactExtension || ext == ".tmp") {
      fs::remove(item.path());
      ++removed;
    }
  }
  return removed;
}

std::string OutputTable::to_csv() const {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(columns);
  for (const auto& row : rows) append_row(row);
  return out;
}

std::string OutputTable::to_json() const {
  json doc = {{"columns", columns}, {"rows", rows}};
  return doc.dump(1) + "\n";
}

std::string OutputTable::render(std::string_view format) const {
  if (format == "csv") return to_csv();
  if (format == "json") return to_json();
  throw std::invalid_argument("unknown format '" + std::string(format) + "'");
}

}  // namespace buchstab
