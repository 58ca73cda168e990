#pragma once

// Requires cpp-httplib (httplib.h) on the include path; link ita_fetch.

#include <httplib.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "ita/errors.hpp"

namespace ita {

struct FetchResult {
    std::filesystem::path path;
    std::uint64_t bytes = 0;
};

struct SplitUrl {
    std::string scheme_host_port;  // "http://host:port"
    std::string path;              // "/labdata/data.txt.gz"
};

inline SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw BadParams("url '" + url + "' has no scheme");
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw BadParams("unsupported url scheme '" + scheme + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    out.scheme_host_port = url.substr(0, path_start);
    out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (out.scheme_host_port.size() <= scheme_end + 3) throw BadParams("url '" + url + "' has no host");
    return out;
}

/// Downloads the dataset into `<cache_dir>/data.txt.gz`, replacing any
/// previous copy only once the transfer has completed.
inline FetchResult fetch_dataset(const std::string& url, const std::filesystem::path& cache_dir) {
    const SplitUrl parts = split_url(url);
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (ec) throw IoError("cannot create cache dir '" + cache_dir.string() + "': " + ec.message());

    const auto final_path = cache_dir / "data.txt.gz";
    const auto tmp_path = cache_dir / "data.txt.gz.part";
    std::uint64_t bytes = 0;
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp_path.string() + "'");

        httplib::Client client(parts.scheme_host_port);
        client.set_follow_location(true);
        client.set_connection_timeout(15);
        client.set_read_timeout(120);
        auto res = client.Get(parts.path, [&](const char* data, std::size_t len) {
            out.write(data, static_cast<std::streamsize>(len));
            bytes += len;
            return static_cast<bool>(out);
        });
        if (!res) {
            std::filesystem::remove(tmp_path, ec);
            throw IoError("download of '" + url + "' failed: " + httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            std::filesystem::remove(tmp_path, ec);
            throw IoError("download of '" + url + "' returned HTTP " + std::to_string(res->status));
        }
        if (bytes == 0) {
            std::filesystem::remove(tmp_path, ec);
            throw IoError("download of '" + url + "' was empty");
        }
    }
    std::filesystem::rename(tmp_path, final_path, ec);
    if (ec) throw IoError("cannot move download into place: " + ec.message());
    return {final_path, bytes};
}

}  // namespace ita
