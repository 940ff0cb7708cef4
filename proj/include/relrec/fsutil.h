// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace relrec {

// Writes content to path atomically: the bytes go to a sibling temp file
// which is renamed over the target, so readers never observe a partial
// file and a failed run leaves no output. Throws IoError.
void atomic_write_file(const std::string& path, const std::string& content);

// Reads a whole file into a string. Throws IoError if unreadable.
std::string read_file(const std::string& path);

}  // namespace relrec
