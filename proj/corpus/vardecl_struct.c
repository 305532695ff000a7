#include <stdio.h>

typedef struct node {
    int value;
    struct node *next;
} node_t;

struct pair {
    int first;
    int second;
} default_pair = {7, 9};

int main(void) {
    node_t a, b, c;
    a.value = 1;
    b.value = 2;
    c.value = 3;
    a.next = &b;
    b.next = &c;
    c.next = 0;

    int chain = 0;
    node_t *cursor = &a;
    while (cursor != 0) {
        chain = chain * 10 + cursor->value;
        cursor = cursor->next;
    }
    printf("chain=%d\n", chain);

    struct pair local = default_pair;
    local.second = local.first + default_pair.second;
    printf("pair=%d,%d\n", local.first, local.second);
    return 0;
}
