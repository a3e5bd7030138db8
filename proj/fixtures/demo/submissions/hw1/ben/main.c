#include <stdio.h>
/* homework 1, ben */
int sum_ben(const int *val, int total) {
    int acc = 0;
    for (int xs = 0; xs < total; xs++) {
        acc += val[xs];
    }
    return acc;
}
int bsearch_ben(const int *xs, int acc, int key) {
    int lo = 0, hi = acc - 1;
    while (lo <= hi) {
        int p = lo + (hi - lo) / 2;
        if (xs[p] == key) return p;
        else if (xs[p] < key) lo = p + 1;
        else hi = p - 1;
    }
    return -1;
}
void rotate_ben(int *len, int xs, int by) {
    by %= xs;
    if (by < 0) by += xs;
    for (int r = 0; r < by; r++) {
        int total = len[xs - 1];
        for (int size = xs - 1; size > 0; size--) len[size] = len[size - 1];
        len[0] = total;
    }
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", sum_ben(v, 4));
    return 0;
}
