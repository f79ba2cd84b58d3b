// Writes 1 MiB of 'x' to stdout.
#include <cstdio>

int main() {
    for (int i = 0; i < (1 << 20); i++) putchar('x');
    return 0;
}
