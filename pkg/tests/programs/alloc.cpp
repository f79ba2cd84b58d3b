// Requests 512 MiB and touches every page.
#include <cstdio>
#include <cstdlib>

int main() {
    size_t n = 512ull << 20;
    volatile char* p = (volatile char*)malloc(n);
    if (!p) return 3;
    long sum = 0;
    for (size_t i = 0; i < n; i += 4096) p[i] = (char)(i >> 12);
    for (size_t i = 0; i < n; i += 4096) sum += p[i];
    printf("%ld\n", sum);
    return 0;
}
