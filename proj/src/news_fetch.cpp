#include <cstdlib>
#include <httplib.h>

#include "hybridcast/errors.hpp"
#include "hybridcast/news.hpp"

namespace hybridcast::news {

std::string fetch_feed(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw DataError("only http:// news endpoints are supported: " + url);
  }
  const auto slash = url.find('/', scheme.size());
  const std::string host = url.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : url.substr(slash);

  httplib::Client client(host);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Headers headers;
  if (const char* key = std::getenv("NEWS_API_KEY"); key != nullptr && *key != '\0') {
    headers.emplace("X-Api-Key", key);
  }
  auto res = client.Get(path, headers);
  if (!res) {
    throw DataError("news fetch failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw DataError("news fetch returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace hybridcast::news
