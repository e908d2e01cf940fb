#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace macrotrace::archive {

// Load one paper's source bundle into memory. Accepts a directory (read
// recursively, '/'-separated relative paths), a .tar archive (ustar), a
// gzip-compressed .tar.gz/.tgz, or a bare file (stored under its basename).
// Throws DataError on unreadable or corrupt inputs.
std::map<std::string, std::string> load_bundle(const std::filesystem::path& path);

// Pick the entry-point .tex file. `hint` (from the manifest) wins when given;
// otherwise: the only .tex file, else the first .tex containing
// \documentclass, else one containing \begin{document}, else main.tex, else
// the lexicographically first .tex. Throws DataError when nothing qualifies.
std::string detect_root_file(const std::map<std::string, std::string>& files,
                             const std::string& hint);

// ustar parsing/inflation exposed for tests
std::map<std::string, std::string> parse_tar(const std::string& bytes,
                                             const std::string& display_name);
std::string gunzip(const std::string& bytes, const std::string& display_name);

}  // namespace macrotrace::archive
