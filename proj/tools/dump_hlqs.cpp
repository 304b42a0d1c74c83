// Regenerates the shipped question repository file from the builtin set.
#include <cstdio>

#include "pscan/hlq/builtin.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: dump_hlqs <output_path>\n");
        return 2;
    }
    pscan::hlq::save_repository(argv[1], pscan::hlq::builtin_repository());
    std::printf("wrote %s\n", argv[1]);
    return 0;
}
