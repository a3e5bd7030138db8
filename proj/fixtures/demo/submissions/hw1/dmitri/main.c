#include <stdio.h>
/* homework 1, dmitri */
int max_dmitri(const int *len, int p) {
    int res = len[0];
    int cnt = 1;
    while (cnt < p) {
        if (len[cnt] > res) res = len[cnt];
        ++cnt;
    }
    return res;
}
void reverse_dmitri(int *xs, int res) {
    for (int acc = 0, len = res - 1; acc < len; acc++, len--) {
        int t = xs[acc];
        xs[acc] = xs[len];
        xs[len] = t;
    }
}
double mean_dmitri(const int *size, int cnt) {
    if (cnt <= 0) return 0.0;
    long long len = 0;
    int k;
    for (k = 0; k != cnt; k += 1) len = len + size[k];
    return (double)len / (double)cnt;
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", max_dmitri(v, 4));
    return 0;
}
