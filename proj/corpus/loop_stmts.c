#include <stdio.h>

int main(void) {
    int i, j, total = 0;

    for (i = 0; i < 5; i++) {
        for (j = 0; j <= i; j++) {
            total += j;
        }
    }
    printf("total=%d\n", total);

    int countdown = 5;
    while (countdown != 0) {
        printf("t-%d\n", countdown);
        countdown--;
    }

    do {
        countdown++;
    } while (countdown < 3);
    printf("countdown=%d\n", countdown);

    for (int k = 0, stop = 8; k < stop; k++) {
        if (k == 2) continue;
        if (k > 5) break;
        printf("k=%d\n", k);
    }

    for (;;) {
        printf("once\n");
        break;
    }

    return 0;
}
