// Reads 64-bit values but keeps the sum in an int, which wraps once
// |A + B| exceeds 2^31 - 1.
#include <cstdio>

int main() {
    long long a, b;
    if (scanf("%lld %lld", &a, &b) != 2) return 1;
    int s = a + b;
    printf("%d\n", s);
    return 0;
}
