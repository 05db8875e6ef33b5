#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "somcheck/errors.hpp"
#include "somcheck/reason.hpp"

namespace somcheck {

using nlohmann::json;

namespace {

std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        std::uint32_t chunk = data[i] << 16;
        if (i + 1 < data.size()) chunk |= data[i + 1] << 8;
        if (i + 2 < data.size()) chunk |= data[i + 2];
        out.push_back(alphabet[(chunk >> 18) & 0x3F]);
        out.push_back(alphabet[(chunk >> 12) & 0x3F]);
        out.push_back(i + 1 < data.size() ? alphabet[(chunk >> 6) & 0x3F] : '=');
        out.push_back(i + 2 < data.size() ? alphabet[chunk & 0x3F] : '=');
    }
    return out;
}

// Splits "http://host:port/path" into client base and request path.
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw BackendUnavailable("malformed endpoint URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<DefectReport> RemoteBackend::analyze(const MarkSet& markset,
                                                 const std::vector<MarkedWidget>&,
                                                 const RuntimeContext& ctx) {
    const PromptBundle prompt = serialize_prompt(markset.mapping, ctx);
    const std::string image_b64 = base64_encode(encode_png(markset.marked_image));

    json body;
    body["model"] = cfg_.model;
    body["messages"] = json::array({
        json{{"role", "system"}, {"content", prompt.system_text}},
        json{{"role", "user"},
             {"content",
              json::array({
                  json{{"type", "text"}, {"text", prompt.user_text}},
                  json{{"type", "image_url"},
                       {"image_url",
                        json{{"url", "data:image/png;base64," + image_b64}}}},
              })}},
    });

    const auto [base, path] = split_endpoint(cfg_.endpoint);
    httplib::Client client(base);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!cfg_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg_.backoff_ms << (attempt - 1)));
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        json reply;
        try {
            reply = json::parse(res->body);
        } catch (const json::parse_error& e) {
            throw UnparseableResponse(std::string("invalid response JSON: ") + e.what());
        }
        std::string content;
        try {
            content = reply.at("choices").at(0).at("message").at("content")
                          .get<std::string>();
        } catch (const json::exception&) {
            throw UnparseableResponse("response lacks choices[0].message.content");
        }
        return parse_model_output(content, markset);
    }
    throw BackendUnavailable("remote backend unreachable after " +
                             std::to_string(cfg_.max_retries + 1) +
                             " attempts: " + last_error);
}

}  // namespace somcheck
