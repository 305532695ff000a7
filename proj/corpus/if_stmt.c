#include <stdio.h>

/* A condition with a visible side effect: the obfuscator must not
 * duplicate this call when adding noise to boolean expressions. */
static int print_and_check(int v) {
    printf("checked %d\n", v);
    return v > 10;
}

int main(void) {
    int x = 42;

    if (x > 12) {
        printf("big\n");
    }

    if (x == 42) {
        printf("answer\n");
    } else if (x != 0) {
        printf("nonzero\n");
    } else {
        printf("zero\n");
    }

    if (print_and_check(x)) {
        printf("side effect ran once\n");
    }

    if (x > 0)
        if (x > 100)
            printf("huge\n");
        else
            printf("moderate\n");

    return 0;
}
