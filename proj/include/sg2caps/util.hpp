#pragma once

#include <filesystem>
#include <functional>
#include <string>

namespace sg2caps {

std::string read_file(const std::filesystem::path& path);

// Writes through a temp file in the same directory, then renames, so readers
// never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// Worker count for per-image processing: SG2CAPS_THREADS caps it, default is
// the hardware concurrency.
unsigned worker_threads();

// Runs fn(i) for i in [0, n). Results must be written to preallocated,
// per-index slots; the chunked schedule keeps outputs independent of the
// worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sg2caps
