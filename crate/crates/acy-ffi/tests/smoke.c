#include <stdio.h>
#include "acy.h"

int main(void) {
    AcyAlgebra *alg = NULL;
    AcyReport *rep = NULL;
    if (acy_algebra_new("E8*", NULL, 1, &alg) != ACY_STATUS_OK) {
        fprintf(stderr, "%s\n", acy_last_error());
        return 1;
    }
    if (acy_compute(alg, 0, 1, &rep) != ACY_STATUS_OK) {
        fprintf(stderr, "%s\n", acy_last_error());
        return 1;
    }
    printf("%d %lld %zu\n", acy_report_passed(rep), (long long)acy_report_dim(rep, ACY_TABLE_HOCHSCHILD, 0, 1),
           acy_report_rows(rep, ACY_TABLE_COHOMOLOGY));
    acy_report_free(rep);
    acy_algebra_free(alg);
    return 0;
}
