/* Loads an artifact named on the command line, prints rn results for every
 * F(k, ebits) pattern at the widest target, and exercises the error path. */
#include <stdio.h>
#include <string.h>

#include "oddlibm.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        return 2;
    }
    OddlibmFunction *f = NULL;
    if (oddlibm_load(argv[1], &f) != ODDLIBM_STATUS_OK) {
        fprintf(stderr, "load: %s\n", oddlibm_last_error());
        return 1;
    }
    uint32_t n, ebits, k_min, k_max;
    oddlibm_format(f, &n, &ebits, &k_min, &k_max);
    printf("%s %u %u %u %u\n", oddlibm_function_name(f), n, ebits, k_min, k_max);
    for (uint64_t x = 0; x < (1ull << k_max); x++) {
        uint64_t y;
        if (oddlibm_evaluate(f, x, k_max, ODDLIBM_RN, &y) != ODDLIBM_STATUS_OK) {
            return 1;
        }
        printf("%llx %llx\n", (unsigned long long)x, (unsigned long long)y);
    }
    uint64_t y;
    if (oddlibm_evaluate(f, 0, n + 1, ODDLIBM_RN, &y) != ODDLIBM_STATUS_UNSUPPORTED_TARGET ||
        strlen(oddlibm_last_error()) == 0) {
        return 1;
    }
    oddlibm_free(f);
    return 0;
}
