// SPDX-License-Identifier: Apache-2.0
#include "tentflow/cli.hpp"

int main(int argc, char** argv) { return tentflow::cli_main(argc, argv); }
