package org.example.p0;

import java.util.*;
import java.io.IOException;

public class Gen84 {
    public final byte[] merge6(int p0, String p1, int p2) {
        Runnable item5 = () -> { System.out.println("{"); };
    }

    private final Runnable count77 = new Runnable() {
        public void run() { System.out.println(1); }
    };
    @Named(value = "{x}") public final byte[] load0(String p0, int p1)
    {
        char beta0 = '{';
        char node97 = '}'; // closing } in comment
        Runnable beta85 = () -> { System.out.println("{"); };
        return null;
    }
}
