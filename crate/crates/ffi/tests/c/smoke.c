#include <math.h>
#include <stdio.h>
#include <string.h>

#include "spade.h"

#define CHECK(cond)                                                     \
    do {                                                                \
        if (!(cond)) {                                                  \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                   \
        }                                                               \
    } while (0)

int main(void) {
    SpadePsf *psf = NULL;
    CHECK(spade_psf_new(SPADE_PSF_KIND_SINC, 1.0, &psf) == SPADE_STATUS_OK);
    double qfi = 0.0;
    CHECK(spade_quantum_fisher(psf, &qfi) == SPADE_STATUS_OK);
    CHECK(fabs(qfi - M_PI * M_PI / 3.0) < 1e-6 * qfi);

    SpadeProjection *model = NULL;
    CHECK(spade_projection_new(psf, &model) == SPADE_STATUS_OK);
    SpadeProbabilities p;
    CHECK(spade_projection_probabilities(model, 0.5, &p) == SPADE_STATUS_OK);
    CHECK(p.p_0 + p.p_a + p.p_lost > 0.999999);

    double d = 0.0;
    int clamped = -1;
    CHECK(spade_estimate_projection(model, 0, 0, &d, &clamped) == SPADE_STATUS_DATA_ERROR);
    CHECK(spade_last_error() != NULL);
    CHECK(spade_estimate_projection(model, 1000, 0, &d, &clamped) == SPADE_STATUS_OK);
    CHECK(d == 0.0 && clamped == 0);

    SpadePsf *bad = NULL;
    CHECK(spade_psf_new(SPADE_PSF_KIND_GAUSSIAN, -1.0, &bad) == SPADE_STATUS_INVALID_PARAMETER);
    CHECK(bad == NULL);

    char *csv = NULL;
    CHECK(spade_sweep_csv("n_trials = 2\nphoton_budget = 10\ndelta_start = 1.0\ndelta_stop = 1.0\n", 1, &csv) ==
          SPADE_STATUS_OK);
    CHECK(strncmp(csv, "method,delta_true,", 18) == 0);
    spade_string_free(csv);

    spade_projection_free(model);
    spade_psf_free(psf);
    printf("ok %s\n", spade_version());
    return 0;
}
