#include <stdio.h>
#include <string.h>

#include "solvlck.h"

int main(void) {
    SlkAlgebra *alg = NULL;
    if (slk_algebra_catalog("ot:2", SLK_BACKEND_RATIONAL, 0.0, &alg) != SLK_STATUS_OK) {
        fprintf(stderr, "catalog: %s\n", slk_last_error_message());
        return 1;
    }
    size_t n = slk_algebra_dim(alg);
    size_t dims[16];
    if (slk_betti(alg, dims, n + 1) != SLK_STATUS_OK) {
        return 2;
    }
    for (size_t i = 0; i <= n; i++) {
        printf("%zu%s", dims[i], i == n ? "\n" : " ");
    }
    if (slk_betti(alg, dims, 2) != SLK_STATUS_BUFFER_TOO_SMALL) {
        return 3;
    }
    char *json = NULL;
    if (slk_algebra_to_json(alg, &json) != SLK_STATUS_OK || strstr(json, "lie_algebra") == NULL) {
        return 4;
    }
    slk_string_free(json);
    slk_algebra_free(alg);
    printf("version %s\n", slk_version());
    return 0;
}
