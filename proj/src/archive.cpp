#include "macrotrace/archive.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "macrotrace/errors.hpp"

namespace macrotrace::archive {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

long parse_octal(const char* field, std::size_t len) {
    long value = 0;
    bool seen = false;
    for (std::size_t i = 0; i < len; ++i) {
        char c = field[i];
        if (c == '\0') break;
        if (c == ' ') continue;
        if (c < '0' || c > '7') return -1;
        value = value * 8 + (c - '0');
        seen = true;
    }
    return seen ? value : -1;
}

}  // namespace

std::map<std::string, std::string> parse_tar(const std::string& bytes,
                                             const std::string& display_name) {
    std::map<std::string, std::string> files;
    const std::size_t n = bytes.size();
    std::size_t off = 0;
    std::string pending_longname;
    while (off + 512 <= n) {
        const char* hdr = bytes.data() + off;
        bool all_zero = true;
        for (int i = 0; i < 512; ++i)
            if (hdr[i] != '\0') {
                all_zero = false;
                break;
            }
        if (all_zero) break;  // end-of-archive marker

        // checksum: header bytes with the chksum field read as spaces
        long stored = parse_octal(hdr + 148, 8);
        long actual = 0;
        for (int i = 0; i < 512; ++i)
            actual += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(hdr[i]);
        if (stored < 0 || stored != actual)
            throw DataError(display_name + ": corrupt tar header at offset " +
                            std::to_string(off));

        long size = parse_octal(hdr + 124, 12);
        if (size < 0 || off + 512 + static_cast<std::size_t>(size) > n)
            throw DataError(display_name + ": truncated tar entry at offset " +
                            std::to_string(off));

        std::string name(hdr, strnlen(hdr, 100));
        char prefix[156];
        std::memcpy(prefix, hdr + 345, 155);
        prefix[155] = '\0';
        if (prefix[0] != '\0') name = std::string(prefix) + "/" + name;
        if (!pending_longname.empty()) {
            name = pending_longname;
            pending_longname.clear();
        }

        const char typeflag = hdr[156];
        const std::string content = bytes.substr(off + 512, static_cast<std::size_t>(size));
        if (typeflag == 'L') {
            pending_longname = content.c_str();  // NUL-terminated
        } else if (typeflag == '0' || typeflag == '\0') {
            if (name.rfind("./", 0) == 0) name = name.substr(2);
            if (!name.empty()) files[name] = content;
        }
        // directories, links, pax headers: skipped

        off += 512 + ((static_cast<std::size_t>(size) + 511) / 512) * 512;
    }
    if (files.empty() && n > 0 && off == 0)
        throw DataError(display_name + ": not a tar archive");
    return files;
}

std::string gunzip(const std::string& bytes, const std::string& display_name) {
    z_stream zs{};
    // 15+32: zlib or gzip header auto-detection
    if (inflateInit2(&zs, 15 + 32) != Z_OK)
        throw DataError(display_name + ": inflateInit failed");
    std::string out;
    out.reserve(bytes.size() * 4);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());
    char buf[1 << 16];
    int ret = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        ret = inflate(&zs, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw DataError(display_name + ": gzip decompression failed");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
    } while (ret != Z_STREAM_END && zs.avail_in > 0);
    inflateEnd(&zs);
    if (ret != Z_STREAM_END)
        throw DataError(display_name + ": truncated gzip stream");
    return out;
}

std::map<std::string, std::string> load_bundle(const fs::path& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::map<std::string, std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            std::string rel = fs::relative(entry.path(), path).generic_string();
            files[rel] = read_file(entry.path());
        }
        return files;
    }
    if (!fs::exists(path, ec))
        throw DataError("source bundle '" + path.string() + "' does not exist");

    const std::string name = path.filename().string();
    std::string bytes = read_file(path);
    if (has_suffix(name, ".tar.gz") || has_suffix(name, ".tgz"))
        return parse_tar(gunzip(bytes, path.string()), path.string());
    if (has_suffix(name, ".tar")) return parse_tar(bytes, path.string());
    if (has_suffix(name, ".gz"))
        return {{name.substr(0, name.size() - 3), gunzip(bytes, path.string())}};
    return {{name, std::move(bytes)}};
}

std::string detect_root_file(const std::map<std::string, std::string>& files,
                             const std::string& hint) {
    if (!hint.empty()) {
        if (!files.count(hint))
            throw DataError("declared root file '" + hint + "' not found in bundle");
        return hint;
    }
    std::vector<std::string> tex;
    for (const auto& [name, _] : files)
        if (has_suffix(name, ".tex")) tex.push_back(name);
    if (tex.empty()) throw DataError("no .tex file in bundle");
    if (tex.size() == 1) return tex[0];
    for (const std::string& name : tex)
        if (files.at(name).find("\\documentclass") != std::string::npos) return name;
    for (const std::string& name : tex)
        if (files.at(name).find("\\begin{document}") != std::string::npos) return name;
    for (const std::string& name : tex)
        if (name == "main.tex") return name;
    return tex.front();  // map order: lexicographically first
}

}  // namespace macrotrace::archive
