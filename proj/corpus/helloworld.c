#include <stdio.h>

int main () {
    printf("Hello World!\n"); // Say hello.
    printf("The answer is %d\n", 42);
    return 0;
}
