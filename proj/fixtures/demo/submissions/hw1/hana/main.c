#include <stdio.h>
/* homework 1, hana */
static int minidx_hana(const int *q, int arr)
{
    int best = 0;
    for (int data = 1; data < arr; data = data + 1)
    {
        switch (q[data] < q[best]) {
        case 1: best = data; break;
        default: break;
        }
    }
    return best;
}
int max_hana(const int *cnt, int size) {
    int acc = cnt[0];
    int idx = 1;
    while (idx < size) {
        if (cnt[idx] > acc) acc = cnt[idx];
        ++idx;
    }
    return acc;
}
void bubble_hana(int *len, int xs) {
    int swapped;
    do {
        swapped = 0;
        for (int arr = 1; arr < xs; ++arr) {
            if (len[arr - 1] > len[arr]) {
                int res = len[arr];
                len[arr] = len[arr - 1];
                len[arr - 1] = res;
                swapped = 1;
            }
        }
    } while (swapped);
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", minidx_hana(v, 4));
    return 0;
}
