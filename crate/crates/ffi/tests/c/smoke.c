#include <math.h>
#include <stdio.h>
#include "chiral_cp.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    CcpMolecule *m = NULL;
    CcpMolecule *e = NULL;
    double f = 0.0, g = 0.0, lc = 0.0;
    CcpRegime regime;

    CHECK(ccp_molecule_dimethyl_disulphide(&m) == CCP_STATUS_OK);
    CHECK(ccp_molecule_len(m) == 1);
    CHECK(ccp_static_force(m, 1e-7, -1, &f, &regime) == CCP_STATUS_OK);
    CHECK(f > 0.0 && regime == CCP_REGIME_STATIC);

    CHECK(ccp_molecule_enantiomer(m, &e) == CCP_STATUS_OK);
    CHECK(ccp_static_force(e, 1e-7, -1, &g, NULL) == CCP_STATUS_OK);
    CHECK(g == -f);

    CHECK(ccp_dynamic_force(m, 1e-7, 2e-15, -1, &f, &regime, &lc) == CCP_STATUS_OK);
    CHECK(regime == CCP_REGIME_POST_LIGHTCONE && lc > 5.0);

    CHECK(ccp_dynamic_force(m, 1e-7, 2e-7 / 299792458.0, -1, &f, NULL, NULL) == CCP_STATUS_LIGHT_CONE);
    char *msg = ccp_last_error_message();
    CHECK(msg != NULL);
    ccp_string_free(msg);

    CHECK(ccp_static_force(m, 1e-7, 0, &f, NULL) == CCP_STATUS_VALIDATION);
    CHECK(ccp_sin_integral(1.0, &f) == CCP_STATUS_OK);
    CHECK(fabs(f - 0.946083070367183) < 1e-14);
    CHECK(ccp_cos_integral(-1.0, &f) == CCP_STATUS_DOMAIN);

    ccp_molecule_free(e);
    ccp_molecule_free(m);
    printf("ok %s\n", ccp_version());
    return 0;
}
