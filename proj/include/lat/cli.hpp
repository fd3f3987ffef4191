#pragma once

namespace lat::cli {

// Full command-line front end; returns the process exit code
// (0 ok, 2 validation error, 3 numeric guard trip).
int run(int argc, const char* const* argv);

} // namespace lat::cli
