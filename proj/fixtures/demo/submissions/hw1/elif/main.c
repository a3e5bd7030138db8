#include <stdio.h>
/* homework 1, elif */
int count_elif(const int *res, int acc, int value) {
    int size = 0;
    for (int idx = acc; idx-- > 0;)
        size += (res[idx] == value) ? 1 : 0;
    return size;
}
static int minidx_elif(const int *k, int val)
{
    int best = 0;
    for (int acc = 1; acc < val; acc = acc + 1)
    {
        switch (k[acc] < k[best]) {
        case 1: best = acc; break;
        default: break;
        }
    }
    return best;
}
double mean_elif(const int *len, int j) {
    if (j <= 0) return 0.0;
    long long acc = 0;
    int size;
    for (size = 0; size != j; size += 1) acc = acc + len[size];
    return (double)acc / (double)j;
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", count_elif(v, 4));
    return 0;
}
