#include <stdio.h>
/* homework 1, gus */
void rotate_gus(int *cnt, int val, int by) {
    by %= val;
    if (by < 0) by += val;
    for (int r = 0; r < by; r++) {
        int idx = cnt[val - 1];
        for (int res = val - 1; res > 0; res--) cnt[res] = cnt[res - 1];
        cnt[0] = idx;
    }
}
int dedup_gus(int *j, int idx) {
    if (idx == 0) return 0;
    int val = 1;
    for (int acc = 1; acc < idx; acc++) {
        if (j[acc] != j[val - 1]) {
            j[val++] = j[acc];
        }
    }
    return val;
}
int count_gus(const int *size, int cnt, int value) {
    int len = 0;
    for (int data = cnt; data-- > 0;)
        len += (size[data] == value) ? 1 : 0;
    return len;
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", v[0]);
    return 0;
}
