#include <stdio.h>
#include "clusterkit.h"

int main(void) {
    ck_family *f = NULL;
    if (ck_family_construct("{\"kind\":\"frankl_furedi\"}", 8, 2, &f) != CK_OK) {
        fprintf(stderr, "%s\n", ck_last_error());
        return 1;
    }
    bool found = true;
    char *witness = NULL;
    ck_find_cluster(f, 2, 3, CK_FIND_EXHAUSTIVE, &found, &witness);
    printf("size %zu, cluster %s\n", ck_family_size(f), found ? "found" : "none");
    ck_string_free(witness);
    ck_family_free(f);

    char *result = NULL;
    if (ck_solve("{\"d\":2,\"k\":2,\"s\":4,\"n\":5,\"mode\":\"exact\"}", &result) != CK_OK) {
        fprintf(stderr, "%s\n", ck_last_error());
        return 1;
    }
    printf("%s\n", result);
    ck_string_free(result);
    return 0;
}
