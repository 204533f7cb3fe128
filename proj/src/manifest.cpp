#include "risline/experiments.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace risline {
namespace {

constexpr const char* kMagic = "risline-manifest 1";
constexpr const char* kConfigMarker = "config:\n";

std::string read_file(const std::filesystem::path& path) { return read_text_file(path); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

bool parse_flag(const std::string& value, const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw std::invalid_argument("manifest: bad value for " + key + ": " + value);
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "version: " << m.version << '\n';
  out << "command: " << to_string(m.command) << '\n';
  out << "seed: " << (m.options.seed ? std::to_string(*m.options.seed) : "none") << '\n';
  out << "extended: " << (m.options.extended ? "true" : "false") << '\n';
  out << "timing: " << (m.options.timing ? "true" : "false") << '\n';
  out << "config_sha256: " << m.config_sha256 << '\n';
  out << "csv_sha256: " << m.csv_sha256 << '\n';
  out << "rows: " << m.row_count << '\n';
  for (const auto& s : m.row_solvers) out << "row: " << s << '\n';
  out << kConfigMarker << m.config_text;
  write_file(path, out.str());
}

Manifest parse_manifest(const std::string& text) {
  const auto marker = text.find(std::string("\n") + kConfigMarker);
  if (marker == std::string::npos) throw std::invalid_argument("manifest: missing embedded config");
  Manifest m;
  m.config_text = text.substr(marker + 1 + std::string(kConfigMarker).size());

  std::istringstream in(text.substr(0, marker));
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw std::invalid_argument("manifest: bad header");
  bool have_command = false;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw std::invalid_argument("manifest: malformed line '" + line + "'");
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 2);
    if (key == "version") {
      m.version = value;
    } else if (key == "command") {
      m.command = parse_command(value);
      have_command = true;
    } else if (key == "seed") {
      if (value != "none") m.options.seed = std::stoull(value);
    } else if (key == "extended") {
      m.options.extended = parse_flag(value, key);
    } else if (key == "timing") {
      m.options.timing = parse_flag(value, key);
    } else if (key == "config_sha256") {
      m.config_sha256 = value;
    } else if (key == "csv_sha256") {
      m.csv_sha256 = value;
    } else if (key == "rows") {
      m.row_count = std::stoull(value);
    } else if (key == "row") {
      m.row_solvers.push_back(value);
    } else {
      throw std::invalid_argument("manifest: unknown key '" + key + "'");
    }
  }
  if (!have_command) throw std::invalid_argument("manifest: missing command");
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) { return parse_manifest(read_file(path)); }

std::string comparable_csv(const std::string& csv, bool timing) {
  if (!timing) return csv;
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!header) {
      const auto comma = line.rfind(',');
      if (comma != std::string::npos) line.erase(comma + 1);
    }
    header = false;
    out << line << '\n';
  }
  return out.str();
}

RunOutput execute_run(Command command, const std::string& config_text, const RunOptions& options,
                      const std::filesystem::path& out_dir) {
  const ExperimentConfig cfg = parse_config(config_text);
  RunOutput result = run_experiment(command, cfg, options);

  std::ostringstream csv;
  write_csv(csv, result.rows);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "results.csv", csv.str());

  Manifest m;
  m.command = command;
  m.options = options;
  m.config_sha256 = sha256_hex(config_text);
  m.csv_sha256 = sha256_hex(comparable_csv(csv.str(), options.timing));
  m.row_count = result.rows.size();
  for (const auto& row : result.rows) {
    m.row_solvers.push_back(row.method + " N=" + std::to_string(row.elements) + " seed=" + std::to_string(row.seed) +
                            " solver=" + row.solver);
  }
  m.config_text = config_text;
  write_manifest(out_dir / "manifest.txt", m);
  return result;
}

VerifyReport verify_manifest(const std::filesystem::path& manifest_path, const std::filesystem::path& scratch_dir) {
  Manifest m;
  try {
    m = read_manifest(manifest_path);
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  const std::string config_hash = sha256_hex(m.config_text);
  if (config_hash != m.config_sha256) {
    return {false, "config hash mismatch: manifest records " + m.config_sha256 + ", embedded config hashes to " +
                       config_hash};
  }
  RunOutput replay;
  try {
    replay = execute_run(m.command, m.config_text, m.options, scratch_dir);
  } catch (const std::exception& e) {
    return {false, std::string("replay failed: ") + e.what()};
  }
  const std::string csv_hash = sha256_hex(comparable_csv(read_file(scratch_dir / "results.csv"), m.options.timing));
  if (csv_hash != m.csv_sha256) {
    return {false, "csv hash mismatch: manifest records " + m.csv_sha256 + ", replay produced " + csv_hash};
  }
  std::string message = "ok: " + std::to_string(replay.rows.size()) + " rows reproduced";
  if (m.version != kLibraryVersion) message += " (manifest version " + m.version + ", library " + kLibraryVersion + ")";
  return {true, message};
}

}  // namespace risline
