#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>

#include "aida/linker.hpp"
#include "httplib.h"
#include "json.hpp"
#include "text_util.hpp"

namespace aida {

namespace {

using detail::percent_encode;

std::string format_confidence(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

// endpoint_url -> (scheme://host[:port], /path). httplib wants them split.
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw FormatError("endpoint URL '" + url + "' must start with http:// or https://");
  const std::size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, "/"};
  return {url.substr(0, path), url.substr(path)};
}

double parse_decimal_field(const nlohmann::json& value, const char* field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string& s = value.get_ref<const std::string&>();
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), parsed);
    if (ec == std::errc() && ptr == s.data() + s.size()) return parsed;
  }
  throw ProtocolError(std::string("annotation response field '") + field +
                      "' is not a decimal value");
}

}  // namespace

std::vector<SpanCandidate> parse_spotlight_response(std::string_view body,
                                                    std::string_view submitted_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("annotation response is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("annotation response is not a JSON object");
  if (!doc.contains("Resources")) return {};
  const auto& resources = doc["Resources"];
  if (!resources.is_array())
    throw ProtocolError("annotation response field 'Resources' is not an array");

  std::vector<SpanCandidate> out;
  out.reserve(resources.size());
  for (const auto& res : resources) {
    if (!res.is_object() || !res.contains("@URI") || !res["@URI"].is_string() ||
        !res.contains("@surfaceForm") || !res["@surfaceForm"].is_string() ||
        !res.contains("@offset") || !res.contains("@similarityScore"))
      throw ProtocolError(
          "annotation resource is missing @URI, @surfaceForm, @offset or @similarityScore");

    const std::string uri = res["@URI"].get<std::string>();
    const std::string surface = res["@surfaceForm"].get<std::string>();
    if (surface.empty()) throw ProtocolError("annotation resource has an empty @surfaceForm");

    const double offset_value = parse_decimal_field(res["@offset"], "@offset");
    if (offset_value < 0 || offset_value != static_cast<double>(static_cast<std::size_t>(offset_value)))
      throw ProtocolError("annotation resource @offset is not a non-negative integer");
    const auto offset = static_cast<std::size_t>(offset_value);

    const double score = parse_decimal_field(res["@similarityScore"], "@similarityScore");
    if (!(score >= 0.0 && score <= 1.0))
      throw ProtocolError("annotation resource @similarityScore is outside [0, 1]");

    if (offset + surface.size() > submitted_text.size() ||
        submitted_text.substr(offset, surface.size()) != surface)
      throw DataError("annotation for <" + uri + "> does not match the submitted text at offset " +
                      std::to_string(offset));

    out.push_back(SpanCandidate{offset, offset + surface.size(), uri, score});
  }
  return out;
}

std::vector<SpanCandidate> spotlight_annotate(const std::string& text,
                                              const AnnotatorConfig& config) {
  const auto [base, path] = split_endpoint(config.endpoint_url);
  httplib::Client client(base);
  client.set_connection_timeout(config.timeout);
  client.set_read_timeout(config.timeout);
  client.set_write_timeout(config.timeout);

  const std::string body = "text=" + percent_encode(text) +
                           "&confidence=" + format_confidence(config.confidence_threshold);
  const httplib::Headers headers{{"Accept", "application/json"}};

  const int attempts = 1 + std::max(0, config.retries);
  std::string last_failure;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto res = client.Post(path, headers, body, "application/x-www-form-urlencoded");
    if (!res) {
      last_failure = "no response (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status >= 400) {
      last_failure = "HTTP status " + std::to_string(res->status);
      continue;
    }
    return parse_spotlight_response(res->body, text);
  }
  throw TransportError("annotation request to " + config.endpoint_url + " failed after " +
                       std::to_string(attempts) + " attempts: " + last_failure);
}

}  // namespace aida
