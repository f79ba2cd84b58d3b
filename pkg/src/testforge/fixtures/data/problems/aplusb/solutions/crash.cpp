// Writes through a null pointer before printing anything.
#include <cstdio>

int main() {
    long long a, b;
    if (scanf("%lld %lld", &a, &b) != 2) return 1;
    volatile long long* p = nullptr;
    *p = a + b;
    printf("%lld\n", a + b);
    return 0;
}
