#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

namespace pmse {

/// Writes through a temporary sibling file and renames it over `path` only
/// after `writer` returns and the stream flushed cleanly. On any failure the
/// temporary is removed and `path` is left untouched.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

}  // namespace pmse
