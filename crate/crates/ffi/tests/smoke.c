/* Links the static library and exercises the header from C. */
#include <stdio.h>
#include "hecke2.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    Hecke2SequenceTable *t = NULL;
    Hecke2Poly *c6 = NULL;
    uint64_t buf[8];
    size_t len = 0;

    CHECK(hecke2_sequences_new(12, &t) == HECKE2_STATUS_OK);
    CHECK(hecke2_sequences_c(t, 6, &c6) == HECKE2_STATUS_OK);
    CHECK(hecke2_poly_exponents(c6, buf, 8, &len) == HECKE2_STATUS_OK);
    CHECK(len == 1 && buf[0] == 4);

    Hecke2KernelBasis *k = NULL;
    CHECK(hecke2_kernel_basis_new(t, 12, 0, &k) == HECKE2_STATUS_OK);
    CHECK(hecke2_kernel_basis_len(k) == 5);

    Hecke2Series *d = NULL, *bad = NULL;
    CHECK(hecke2_theta(HECKE2_THETA_D, 64, &d) == HECKE2_STATUS_OK);
    CHECK(hecke2_series_precision(d) == 64);
    CHECK(hecke2_hecke_tp(d, 5, &bad) == HECKE2_STATUS_BAD_PRIME);
    CHECK(bad == NULL);
    char msg[128];
    CHECK(hecke2_last_error(msg, sizeof msg) > 0);

    hecke2_series_free(d);
    hecke2_kernel_basis_free(k);
    hecke2_poly_free(c6);
    hecke2_sequences_free(t);
    printf("ok\n");
    return 0;
}
