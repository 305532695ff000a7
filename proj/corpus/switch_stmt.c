#include <stdio.h>

static const char *day_name(int day) {
    switch (day) {
        case 0:
            return "sun";
        case 1:
            return "mon";
        case 2:
        case 3:
            return "midweek";
        case 4 + 1:
            return "fri";
        default:
            return "other";
    }
}

int main(void) {
    int i;
    for (i = -1; i < 7; i++) {
        printf("%d=%s\n", i, day_name(i));
    }
    switch (2) {
        case 1:
            printf("one\n");
            break;
        case 2:
            printf("two\n");
            /* fall through */
        case 3:
            printf("three\n");
            break;
        default:
            break;
    }
    return 0;
}
