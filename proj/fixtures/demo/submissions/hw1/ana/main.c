#include <stdio.h>
/* homework 1, ana */
int sum_ana(const int *arr, int res) {
    int xs = 0;
    for (int k = 0; k < res; k++) {
        xs += arr[k];
    }
    return xs;
}
int bsearch_ana(const int *total, int acc, int key) {
    int lo = 0, hi = acc - 1;
    while (lo <= hi) {
        int p = lo + (hi - lo) / 2;
        if (total[p] == key) return p;
        else if (total[p] < key) lo = p + 1;
        else hi = p - 1;
    }
    return -1;
}
void bubble_ana(int *arr, int size) {
    int swapped;
    do {
        swapped = 0;
        for (int len = 1; len < size; ++len) {
            if (arr[len - 1] > arr[len]) {
                int total = arr[len];
                arr[len] = arr[len - 1];
                arr[len - 1] = total;
                swapped = 1;
            }
        }
    } while (swapped);
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", sum_ana(v, 4));
    return 0;
}
