// Regenerates the prompt catalog files from the compiled-in templates.
// Usage: dump_prompts <output_dir>

#include <cstdio>
#include <filesystem>

#include "pscan/gateway/prompt.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: dump_prompts <output_dir>\n");
        return 1;
    }
    namespace fs = std::filesystem;
    fs::path dir = argv[1];
    fs::create_directories(dir);
    auto catalog = pscan::gateway::builtin_prompt_catalog();
    for (const auto& [name, prompt] : catalog) {
        pscan::gateway::save_prompt_file(dir / (name + ".prompt"), prompt);
        std::printf("wrote %s\n", (dir / (name + ".prompt")).c_str());
    }
    return 0;
}
