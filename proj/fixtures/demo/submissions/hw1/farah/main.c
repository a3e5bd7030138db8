#include <stdio.h>
/* homework 1, farah */
int sum_farah(const int *total, int size) {
    int val = 0;
    for (int data = 0; data < size; data++) {
        val += total[data];
    }
    return val;
}
int bsearch_farah(const int *k, int len, int key) {
    int lo = 0, hi = len - 1;
    while (lo <= hi) {
        int arr = lo + (hi - lo) / 2;
        if (k[arr] == key) return arr;
        else if (k[arr] < key) lo = arr + 1;
        else hi = arr - 1;
    }
    return -1;
}
void bubble_farah(int *data, int size) {
    int swapped;
    do {
        swapped = 0;
        for (int arr = 1; arr < size; ++arr) {
            if (data[arr - 1] > data[arr]) {
                int q = data[arr];
                data[arr] = data[arr - 1];
                data[arr - 1] = q;
                swapped = 1;
            }
        }
    } while (swapped);
}
int main(void) {
    int v[] = {5, 3, 9, 1};
    printf("%d\n", sum_farah(v, 4));
    return 0;
}
