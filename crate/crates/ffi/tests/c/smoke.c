#include <math.h>
#include <stdio.h>
#include <string.h>

#include "silofill.h"

int main(void) {
    SfSource *src = sf_source_new();
    if (sf_source_add_atom_1d(src, 0.5, 1.0) != SF_STATUS_OK) return 1;

    SfParameters p = sf_parameters_unit();
    SfProfile *exact = NULL;
    if (sf_exact_1d(src, 1.0, 101, &p, &exact) != SF_STATUS_OK) return 2;
    size_t n = sf_profile_len(exact);
    const double *u = sf_profile_u(exact);
    if (n != 101 || fabs(u[50] - (0.5 - log(1.5))) > 1e-4) return 3;

    SfScheme s = sf_scheme_default();
    SfProfile *fd = NULL;
    if (sf_evolve_1d(src, 1.0, 51, &p, &s, &fd) != SF_STATUS_OK) return 4;
    if (!sf_profile_converged(fd) || sf_profile_alarm(fd)) return 5;

    SfProfile *bad = NULL;
    if (sf_similarity_1d(src, 1.0, 2, &p, &bad) != SF_STATUS_INVALID_GRID) return 6;
    if (strlen(sf_last_error_message()) == 0 || bad != NULL) return 7;

    printf("c=%.6f steps=%zu\n", sf_profile_c(fd), sf_profile_steps(fd));
    sf_profile_free(exact);
    sf_profile_free(fd);
    sf_source_free(src);
    return 0;
}
