if (c) x = 1; else x = 2;
y = 3;
switch (y) {
  case 1: z = x; break;
  default: z = 0;
}
