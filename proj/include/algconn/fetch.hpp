#pragma once

// Dataset download with size and SHA-256 verification. Needs libcurl and
// libcrypto at link time; the rest of the library does not.

#include <curl/curl.h>
#include <openssl/evp.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "algconn/error.hpp"

namespace algconn {

struct ManifestEntry {
  std::string name;
  std::string url;
  std::optional<std::string> sha256;  // lowercase hex
  std::optional<std::uint64_t> bytes;
  bool directed = false;
  std::string note;
};

inline std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.contains("datasets") || !doc["datasets"].is_array())
    throw DataError("manifest lacks a 'datasets' array");
  std::vector<ManifestEntry> out;
  for (const auto& d : doc["datasets"]) {
    ManifestEntry e;
    e.name = d.at("name").get<std::string>();
    e.url = d.value("url", "");
    if (d.contains("sha256") && d["sha256"].is_string()) e.sha256 = d["sha256"].get<std::string>();
    if (d.contains("bytes") && d["bytes"].is_number_unsigned()) e.bytes = d["bytes"].get<std::uint64_t>();
    e.directed = d.value("directed", false);
    e.note = d.value("note", "");
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace detail {
inline std::size_t append_body(char* ptr, std::size_t size, std::size_t nmemb, void* user) {
  static_cast<std::string*>(user)->append(ptr, size * nmemb);
  return size * nmemb;
}
}  // namespace detail

/// Downloads a URL (any scheme libcurl supports, file:// included).
inline std::string download(const std::string& url) {
  static const bool initialised = curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK;
  if (!initialised) throw Error("libcurl initialisation failed");
  CURL* h = curl_easy_init();
  if (!h) throw Error("libcurl handle creation failed");
  std::string body;
  curl_easy_setopt(h, CURLOPT_URL, url.c_str());
  curl_easy_setopt(h, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(h, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(h, CURLOPT_CONNECTTIMEOUT, 30L);
  curl_easy_setopt(h, CURLOPT_WRITEFUNCTION, &detail::append_body);
  curl_easy_setopt(h, CURLOPT_WRITEDATA, &body);
  const CURLcode rc = curl_easy_perform(h);
  curl_easy_cleanup(h);
  if (rc != CURLE_OK)
    throw DataError("download of " + url + " failed: " + curl_easy_strerror(rc));
  return body;
}

struct FetchResult {
  std::filesystem::path path;
  std::string sha256;
  std::uint64_t bytes = 0;
  bool pinned = false;  // the manifest declared a hash that was checked
};

/// Downloads one entry into dir/<name>.txt after checking its declared size
/// and hash. Nothing is written when verification fails.
inline FetchResult fetch_dataset(const ManifestEntry& e, const std::filesystem::path& dir) {
  if (e.url.empty())
    throw DataError("manifest entry '" + e.name + "' has no URL" +
                    (e.note.empty() ? std::string() : " (" + e.note + ")"));
  const std::string body = download(e.url);
  FetchResult r;
  r.bytes = body.size();
  r.sha256 = sha256_hex(body);
  if (e.bytes && *e.bytes != r.bytes)
    throw DataError(e.name + ": expected " + std::to_string(*e.bytes) + " bytes, got " +
                    std::to_string(r.bytes));
  if (e.sha256) {
    if (*e.sha256 != r.sha256)
      throw DataError(e.name + ": SHA-256 mismatch (expected " + *e.sha256 + ", got " + r.sha256 + ")");
    r.pinned = true;
  }
  std::filesystem::create_directories(dir);
  r.path = dir / (e.name + ".txt");
  std::ofstream out(r.path, std::ios::binary);
  if (!out) throw DataError("cannot write " + r.path.string());
  out << body;
  return r;
}

}  // namespace algconn
