#include <stdio.h>

int global_counter = 0;

static int scale_factor = 3;

int foo(int param) {
    int x = 42 + param;
    return x;
}

static int bump(int amount) {
    global_counter += amount * scale_factor;
    return global_counter;
}

int main(void) {
    int y = 2;
    int result = foo(y);
    printf("%d\n", result);
    printf("%d\n", bump(result));
    {
        int y = 10; /* shadows the outer y */
        printf("%d\n", foo(y));
    }
    printf("%d\n", y);
    return 0;
}
