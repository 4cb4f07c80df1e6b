#pragma once

namespace steklov_cli {

// Exit codes: 0 success, 2 input error, 3 numerical failure, 4 optimizer halt.
constexpr int exit_ok = 0;
constexpr int exit_input_error = 2;
constexpr int exit_numerical_error = 3;
constexpr int exit_optimizer_halt = 4;

int run(int argc, char** argv);

} // namespace steklov_cli
