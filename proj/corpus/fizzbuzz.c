#include <stdio.h>

static int divisible(int value, int by) {
    return value % by == 0;
}

static const char *classify(int value) {
    if (divisible(value, 15)) {
        return "FizzBuzz";
    }
    if (divisible(value, 3)) {
        return "Fizz";
    }
    if (divisible(value, 5)) {
        return "Buzz";
    }
    return 0;
}

static int checksum(int limit) {
    int acc = 7;
    for (int i = 1; i <= limit; i++) {
        const char *label = classify(i);
        if (label != 0) {
            acc = acc * 31 + i;
        } else {
            acc = acc + i * 3;
        }
        acc = acc % 65521;
    }
    return acc;
}

int main(void) {
    int limit = 30;
    for (int i = 1; i <= limit; i++) {
        const char *label = classify(i);
        if (label != 0) {
            printf("%s\n", label);
        } else {
            printf("%d\n", i);
        }
    }

    printf("checksum(100)=%d\n", checksum(100));
    printf("checksum(1000)=%d\n", checksum(1000));

    int fizz_count = 0;
    int buzz_count = 0;
    int both_count = 0;
    for (int i = 1; i <= 200; i++) {
        int f = divisible(i, 3);
        int b = divisible(i, 5);
        if (f && b) {
            both_count++;
        } else if (f) {
            fizz_count++;
        } else if (b) {
            buzz_count++;
        }
    }
    printf("fizz=%d buzz=%d both=%d\n", fizz_count, buzz_count, both_count);
    return 0;
}
