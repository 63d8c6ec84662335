#include <math.h>
#include <stdio.h>

#include "bandkern.h"

int main(void) {
    const int64_t nums[] = {0};
    const uint64_t dens[] = {1};
    BkWeights w = {BK_WEIGHT_KIND_HARMONIC, 1.0, 2.0};
    BkSpace *s = NULL;
    if (bk_space_new_angles(nums, dens, 1, w, &s) != BK_STATUS_OK) {
        return 1;
    }
    BkComplex one = {1.0, 0.0};
    BkComplex v;
    double tail;
    if (bk_kernel_eval(s, one, one, 1e-6, &v, &tail) != BK_STATUS_OK) {
        return 2;
    }
    double exact = M_PI * M_PI / 6.0 - 1.0;
    BkComplex far = {2.0, 0.0};
    BkStatus st = bk_kernel_eval(s, far, one, 1e-6, &v, NULL);
    char msg[128];
    bk_last_error_message(msg, sizeof msg);
    printf("%.12f %d %s\n", exact, (int)st, msg);
    bk_space_free(s);
    return fabs(exact - 0.644934066848) < 1e-9 && st == BK_STATUS_DOMAIN ? 0 : 3;
}
