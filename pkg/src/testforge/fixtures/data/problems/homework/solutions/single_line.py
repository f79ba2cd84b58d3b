# expects all values on the second line
import sys

lines = sys.stdin.read().splitlines()
a = [int(x) for x in lines[1].split()]
print(max(a))
