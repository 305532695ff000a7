#include <stdio.h>

struct point {
    int px;
    int py;
};

struct rect {
    struct point corner;
    int width;
    int height;
};

struct {
    int hits;
    int misses;
} stats;

static int area(struct rect r) {
    return r.width * r.height;
}

int main(void) {
    struct point p;
    p.px = 3;
    p.py = 4;

    struct rect r;
    r.corner = p;
    r.width = 10;
    r.height = 20;

    struct rect *rp = &r;
    printf("area=%d\n", area(r));
    printf("corner=%d,%d\n", rp->corner.px, rp->corner.py);

    stats.hits = 1;
    stats.misses = 2;
    printf("stats=%d/%d\n", stats.hits, stats.misses);
    return 0;
}
