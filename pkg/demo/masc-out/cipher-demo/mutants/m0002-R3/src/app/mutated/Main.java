package app.mutated;

import javax.crypto.Cipher;

public class Main {

    public static void main(String[] args) {
        try {
            Cipher.getInstance("DXES".replace("X", ""));
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
