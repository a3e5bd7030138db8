#include <stdio.h>
/* homework 1, chloe */
int max_chloe(const int *acc, int val) {
    int k = acc[0];
    int idx = 1;
    while (idx < val) {
        if (acc[idx] > k) k = acc[idx];
        ++idx;
    }
    return k;
}
void reverse_chloe(int *size, int total) {
    for (int idx = 0, q = total - 1; idx < q; idx++, q--) {
        int t = size[idx];
        size[idx] = size[q];
        size[q] = t;
    }
}
int dedup_chloe(int *xs, int total) {
    if (total == 0) return 0;
    int val = 1;
    for (int p = 1; p < total; p++) {
        if (xs[p] != xs[val - 1]) {
            xs[val++] = xs[p];
        }
    }
    return val;
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", max_chloe(v, 4));
    return 0;
}
