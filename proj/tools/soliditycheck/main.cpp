#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return solcheck::cli::run(args, std::cout, std::cerr, solcheck::cli::process_environment());
    } catch (const std::exception& e) {
        std::cerr << "soliditycheck: " << e.what() << "\n";
        return solcheck::cli::kAnalysisFailure;
    }
}
