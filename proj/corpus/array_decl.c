#include <stdio.h>

int fib[10];

static const int primes[] = {2, 3, 5, 7, 11};

static char grid[2][3] = {{'a', 'b', 'c'}, {'x', 'y', 'z'}};

int main(void) {
    fib[0] = 0;
    fib[1] = 1;
    for (int i = 2; i < 10; i++) {
        fib[i] = fib[i - 1] + fib[i - 2];
    }
    printf("fib[9]=%d\n", fib[9]);

    int sum = 0;
    for (int i = 0; i < (int)(sizeof(primes) / sizeof(primes[0])); i++) {
        sum += primes[i];
    }
    printf("prime sum=%d\n", sum);

    for (int row = 0; row < 2; row++) {
        for (int col = 0; col < 3; col++) {
            printf("%c", grid[row][col]);
        }
    }
    printf("\n");

    const char *msg = "array demo";
    printf("%s has %d chars\n", msg, 10);
    return 0;
}
