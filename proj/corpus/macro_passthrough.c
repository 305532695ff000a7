#include <stdio.h>

#define GRID_SIZE 4
#define GREETING "macro demo"
#define SQUARE(n) ((n) * (n))

int cells[GRID_SIZE];

int main(void) {
    printf("%s\n", GREETING);
    for (int i = 0; i < GRID_SIZE; i++) {
        cells[i] = SQUARE(i + 1);
    }
    int total = 0;
    for (int i = 0; i < GRID_SIZE; i++) {
        total += cells[i];
    }
    printf("total=%d of %d cells\n", total, GRID_SIZE);
    return 0;
}
