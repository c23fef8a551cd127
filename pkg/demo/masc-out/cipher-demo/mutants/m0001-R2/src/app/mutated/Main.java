package app.mutated;

import javax.crypto.Cipher;

public class Main {

    public static void main(String[] args) {
        try {
            Cipher.getInstance("D" + "ES");
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
