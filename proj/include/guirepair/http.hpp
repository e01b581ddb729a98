#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace guirepair::http {

struct Url {
  std::string scheme_host_port;  // "https://api.example.com:443"
  std::string path;              // "/v1/chat/completions"
};

Url parse_url(const std::string& url);

struct Response {
  int status = 0;  // 0 = transport failure
  std::string body;
  std::string error;  // transport error description when status == 0
};

using Headers = std::vector<std::pair<std::string, std::string>>;

Response get(const std::string& url, const Headers& headers = {},
             std::chrono::milliseconds timeout = std::chrono::seconds(60));
Response post_json(const std::string& url, const std::string& body, const Headers& headers = {},
                   std::chrono::milliseconds timeout = std::chrono::seconds(120));

}  // namespace guirepair::http
