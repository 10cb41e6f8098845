#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace iqb {

// FNV-1a 64-bit. Provenance fingerprinting for run manifests, not security.
std::uint64_t fnv1a64(std::string_view bytes);

// "fnv1a64:<16 hex digits>" over the file's bytes; throws on unreadable files.
std::string digest_file(const std::string& path);

std::string digest_string(std::string_view bytes);

}  // namespace iqb
