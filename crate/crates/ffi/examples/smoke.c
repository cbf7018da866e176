#include <stdio.h>
#include <stdlib.h>
#include "poissonlab.h"

int main(void) {
    PlAlgebra *so3 = NULL;
    if (pl_algebra_by_name("so3", &so3) != PL_STATUS_OK) {
        return 10;
    }
    double x[3] = {1.0, 0.0, 0.0}, y[3] = {0.0, 1.0, 0.0}, z[3];
    if (pl_algebra_bracket(so3, x, y, 3, z, 3) != PL_STATUS_OK || z[2] != 1.0) {
        return 11;
    }
    PlReport *report = NULL;
    const char *config = "suites = [\"lie-algebra\"]\n";
    if (pl_run(config, NULL, &report) != PL_STATUS_OK) {
        return 12;
    }
    size_t n = 0;
    pl_report_len(report, &n);
    char name[128];
    for (size_t i = 0; i < n; i++) {
        PlRecord rec;
        pl_report_record(report, i, &rec);
        pl_report_check_name(report, i, name, sizeof name, NULL);
        printf("%s %s %g\n", name, rec.passed ? "pass" : "fail", rec.residual);
    }
    int code = pl_report_exit_code(report);
    pl_report_free(report);

    PlAlgebra *bad = NULL;
    if (pl_algebra_by_name("gl7", &bad) != PL_STATUS_UNKNOWN) {
        return 13;
    }
    char msg[256];
    pl_last_error_message(msg, sizeof msg, NULL);
    printf("error: %s\n", msg);
    pl_algebra_free(so3);
    return code;
}
