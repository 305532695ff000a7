#include <stdio.h>

int twice(int v);
int combine(int a, int b);
static long scaled(long base, int factor);
void report(const char *label, int value);

int main(void) {
    report("twice", twice(21));
    report("combine", combine(3, 4));
    report("scaled", (int)scaled(5, 6));
    return 0;
}

int twice(int v) {
    return v * 2;
}

int combine(int a, int b) {
    return twice(a) + b;
}

static long scaled(long base, int factor) {
    return base * factor;
}

void report(const char *label, int value) {
    printf("%s -> %d\n", label, value);
}
