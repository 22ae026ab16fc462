#include <stdio.h>
#include "qdilog.h"

int main(void) {
    QdParam *p = NULL;
    QdValue v;
    QdComplex x = {0.5, 0.0};
    if (qd_param_from_b(0.8, &p) != QD_STATUS_OK) {
        fprintf(stderr, "%s\n", qd_last_error());
        return 1;
    }
    QdStatus s = qd_gb(p, x, 1e-12, &v);
    if (s == QD_STATUS_OK)
        printf("G_b(0.5) = %.15g%+.15gi (err %.1e)\n", v.value.re, v.value.im, v.err_estimate);
    qd_param_free(p);
    return s == QD_STATUS_OK ? 0 : 1;
}
