#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "qsc/error.hpp"

namespace qsc {

/// Writes to PATH.tmp and renames over PATH, so readers never see a partial file.
inline void write_atomically(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::BadParameter, "cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw Error(ErrorCode::BadParameter, "write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace qsc
