// Deterministic output: the first 20000 squares.
#include <cstdio>

int main() {
    for (long long i = 0; i < 20000; i++) printf("%lld\n", i * i);
    return 0;
}
