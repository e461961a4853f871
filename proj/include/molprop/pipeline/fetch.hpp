#pragma once

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "molprop/log.hpp"
#include "molprop/pipeline/dataset.hpp"

namespace molprop::pipeline {

class FetchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace fetch_detail {

struct UrlParts {
  std::string scheme_host;  // e.g. https://host
  std::string path;
};

inline UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw FetchError("malformed url: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline std::string http_get(const std::string& url, int redirects_left = 4) {
  const auto parts = split_url(url);
  httplib::Client client(parts.scheme_host);
  client.set_connection_timeout(20, 0);
  client.set_read_timeout(60, 0);
  client.set_follow_location(true);
  auto res = client.Get(parts.path);
  if (!res) throw FetchError("network failure fetching " + url + ": " + httplib::to_string(res.error()));
  if (res->status >= 300 && res->status < 400 && redirects_left > 0 && res->has_header("Location"))
    return http_get(res->get_header_value("Location"), redirects_left - 1);
  if (res->status != 200)
    throw FetchError("HTTP " + std::to_string(res->status) + " fetching " + url);
  return res->body;
}

}  // namespace fetch_detail

// Download the canonical CSV for a named benchmark dataset into the cache
// directory. Idempotent: a cached file short-circuits the network. On
// failure the error explains the local-file fallback.
inline std::filesystem::path fetch_dataset(const std::string& name,
                                           const std::filesystem::path& dir = cache_dir(),
                                           bool force = false) {
  const DatasetSchema& schema = dataset_schema(name);
  std::filesystem::create_directories(dir);
  const auto target = dir / (name + ".csv");
  if (!force && std::filesystem::exists(target) && std::filesystem::file_size(target) > 0) {
    log::debug("fetch " + name + ": cache hit at " + target.string());
    return target;
  }
  log::info("fetch " + name + ": downloading " + schema.url);
  std::string body;
  try {
    body = fetch_detail::http_get(schema.url);
  } catch (const FetchError& e) {
    throw FetchError(std::string(e.what()) + "; place the file manually at " + target.string() +
                     " or generate an offline stand-in with 'molprop fetch " + name +
                     " --synthetic'");
  }
  if (body.empty()) throw FetchError("empty response fetching " + schema.url);
  std::ofstream out(target, std::ios::binary);
  out << body;
  out.close();
  log::info("fetch " + name + ": wrote " + std::to_string(body.size()) + " bytes");
  return target;
}

}  // namespace molprop::pipeline
