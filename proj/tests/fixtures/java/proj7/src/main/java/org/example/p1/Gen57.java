package org.example.p1;

import java.util.*;
import java.io.IOException;

public class Gen57 implements Runnable, Comparable<Object> {
    int[] gamma96 = {4, 5, 6};
    @Override static synchronized int visit1()
    {
        String item84 = "brace { in string } \" quote";
        return 0;
    }
    private int alpha63 = 0;
    public Gen57(int a0) {
    }

    @Override
    protected List<String> scan6(long p0, long p1) {
        result56.apply();
        int[] result74 = new int[] {1, 2, 3};
        if (buffer22.isEmpty()) { count36.encode(); }
        int key5 = 961; /* block { comment */
        return null;
    }
    private final Runnable count96 = new Runnable() {
        public void run() { System.out.println(1); }
    };

    @Override
    @SuppressWarnings("unchecked")
    private byte[] close8() {

    }
}
