#include "httplib.h"

#include "guirepair/http.hpp"

#include "guirepair/error.hpp"

namespace guirepair::http {

Url parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "URL without scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

Response to_response(const httplib::Result& res) {
  Response out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

httplib::Client make_client(const Url& u, std::chrono::milliseconds timeout) {
  httplib::Client cli(u.scheme_host_port);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  cli.set_follow_location(true);
  return cli;
}

httplib::Headers to_headers(const Headers& headers) {
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  return h;
}

}  // namespace

Response get(const std::string& url, const Headers& headers, std::chrono::milliseconds timeout) {
  Url u = parse_url(url);
  auto cli = make_client(u, timeout);
  return to_response(cli.Get(u.path, to_headers(headers)));
}

Response post_json(const std::string& url, const std::string& body, const Headers& headers,
                   std::chrono::milliseconds timeout) {
  Url u = parse_url(url);
  auto cli = make_client(u, timeout);
  return to_response(cli.Post(u.path, to_headers(headers), body, "application/json"));
}

}  // namespace guirepair::http
