#pragma once

namespace relex {

// Entry point behind tools/relex_main.cpp; exposed for in-process testing.
// Exit codes: 0 success, 1 validation/runtime error, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace relex
