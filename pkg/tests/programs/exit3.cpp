#include <cstdio>

int main() {
    fprintf(stderr, "giving up\n");
    return 3;
}
